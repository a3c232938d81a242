use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::closed_form::{
    dirichlet_solution, extend, neumann_solution, BoundaryKind, Evaluator, ExtendedSolution,
    SolutionEvaluator, WaveConfig,
};
use crate::energy::{
    dirichlet_rate_residual, first_identity_residual, second_identity_residual, IdentityCheck,
};
use crate::error::{invalid, Result};
use crate::fd_oracle::FdBoundary;
use crate::quadrature::Tolerance;
use crate::radial_data::{dirichlet_data_with, neumann_data_with, CutoffBeta, CutoffChi, RadialProfile, CUTOFF_NAMES};

/// Everything the sweep needs for one exterior problem at one ε.
#[derive(Debug, Clone)]
pub struct ExteriorCase {
    pub eps: f64,
    pub phi_eps: RadialProfile,
    pub psi_eps: RadialProfile,
    pub solution: Evaluator,
    pub extended: ExtendedSolution,
}

/// One boundary problem around the small ball.
pub trait ExteriorProblem: Send + Sync + fmt::Debug {
    fn kind(&self) -> BoundaryKind;

    /// The Sobolev order in which the extended solution is compared with the whole-space one.
    fn sobolev_order(&self) -> u32;

    fn fd_boundary(&self) -> FdBoundary;

    /// The modified data for this boundary condition.
    fn modify(&self, profile: &RadialProfile, eps: f64) -> Result<RadialProfile>;

    fn solve(
        &self,
        phi_eps: &RadialProfile,
        psi_eps: &RadialProfile,
        cfg: WaveConfig,
        eps: f64,
    ) -> Result<Evaluator>;

    /// Energy identity checks on `[0, t_final]`. The second is absent when
    /// the problem has only one.
    fn identities(
        &self,
        u: &dyn SolutionEvaluator,
        case: &ExteriorCase,
        t_final: f64,
        features: &[f64],
        tol: Tolerance,
    ) -> Result<(IdentityCheck, Option<IdentityCheck>)>;

    /// Scaled boundary quantities of the exterior solution at `r = ε`, each a sup over `times`.
    fn boundary_constants(&self, case: &ExteriorCase, times: &[f64]) -> Result<BTreeMap<String, f64>>;

    fn build(
        &self,
        phi: &RadialProfile,
        psi: &RadialProfile,
        cfg: WaveConfig,
        eps: f64,
    ) -> Result<ExteriorCase> {
        let phi_eps = self.modify(phi, eps)?;
        let psi_eps = self.modify(psi, eps)?;
        let solution = self.solve(&phi_eps, &psi_eps, cfg, eps)?;
        let extended = extend(solution.clone(), eps, self.kind())?;
        Ok(ExteriorCase {
            eps,
            phi_eps,
            psi_eps,
            solution,
            extended,
        })
    }
}

pub(crate) fn sup_abs(times: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    times.iter().try_fold(0.0_f64, |m, &t| Ok(m.max(f(t)?.abs())))
}

/// Scaled traces of the whole-space solution on `r = ε`, each a sup over `times`.
pub fn cauchy_boundary_constants(
    u: &dyn SolutionEvaluator,
    eps: f64,
    times: &[f64],
) -> Result<BTreeMap<String, f64>> {
    Ok(BTreeMap::from([
        ("sup_ur_over_eps".to_string(), sup_abs(times, |t| u.dr(t, eps))? / eps),
        ("sup_urt_over_eps".to_string(), sup_abs(times, |t| u.drt(t, eps))? / eps),
        ("sup_ut".to_string(), sup_abs(times, |t| u.dt(t, eps))?),
    ]))
}

#[derive(Debug, Clone)]
pub struct NeumannProblem {
    beta: CutoffBeta,
}

impl NeumannProblem {
    pub fn new(beta: CutoffBeta) -> Self {
        Self { beta }
    }
}

impl ExteriorProblem for NeumannProblem {
    fn kind(&self) -> BoundaryKind {
        BoundaryKind::Neumann
    }

    fn sobolev_order(&self) -> u32 {
        2
    }

    fn fd_boundary(&self) -> FdBoundary {
        FdBoundary::RobinAtEps
    }

    fn modify(&self, profile: &RadialProfile, eps: f64) -> Result<RadialProfile> {
        neumann_data_with(profile, eps, &self.beta)
    }

    fn solve(
        &self,
        phi_eps: &RadialProfile,
        psi_eps: &RadialProfile,
        cfg: WaveConfig,
        eps: f64,
    ) -> Result<Evaluator> {
        Ok(Arc::new(neumann_solution(phi_eps, psi_eps, cfg, eps)?))
    }

    fn identities(
        &self,
        u: &dyn SolutionEvaluator,
        case: &ExteriorCase,
        t_final: f64,
        features: &[f64],
        tol: Tolerance,
    ) -> Result<(IdentityCheck, Option<IdentityCheck>)> {
        let sol = || case.solution.clone();
        let (first, second) = rayon::join(
            || first_identity_residual(u, sol(), case.eps, t_final, features, tol),
            || second_identity_residual(u, sol(), case.eps, t_final, features, tol),
        );
        Ok((first?, Some(second?)))
    }

    fn boundary_constants(&self, case: &ExteriorCase, times: &[f64]) -> Result<BTreeMap<String, f64>> {
        let (eps, sol) = (case.eps, &case.solution);
        Ok(BTreeMap::from([
            ("eps_sup_ut_exterior".to_string(), eps * sup_abs(times, |t| sol.dt(t, eps))?),
            ("eps2_sup_urr_exterior".to_string(), eps * eps * sup_abs(times, |t| sol.drr(t, eps))?),
        ]))
    }
}

#[derive(Debug, Clone)]
pub struct DirichletProblem {
    chi: CutoffChi,
}

impl DirichletProblem {
    pub fn new(chi: CutoffChi) -> Self {
        Self { chi }
    }
}

impl ExteriorProblem for DirichletProblem {
    fn kind(&self) -> BoundaryKind {
        BoundaryKind::Dirichlet
    }

    fn sobolev_order(&self) -> u32 {
        1
    }

    fn fd_boundary(&self) -> FdBoundary {
        FdBoundary::DirichletAtEps
    }

    fn modify(&self, profile: &RadialProfile, eps: f64) -> Result<RadialProfile> {
        dirichlet_data_with(profile, eps, &self.chi)
    }

    fn solve(
        &self,
        phi_eps: &RadialProfile,
        psi_eps: &RadialProfile,
        cfg: WaveConfig,
        eps: f64,
    ) -> Result<Evaluator> {
        Ok(Arc::new(dirichlet_solution(phi_eps, psi_eps, cfg, eps)?))
    }

    fn identities(
        &self,
        u: &dyn SolutionEvaluator,
        case: &ExteriorCase,
        t_final: f64,
        features: &[f64],
        tol: Tolerance,
    ) -> Result<(IdentityCheck, Option<IdentityCheck>)> {
        let rate = dirichlet_rate_residual(u, case.solution.clone(), case.eps, t_final, features, tol)?;
        Ok((rate, None))
    }

    fn boundary_constants(&self, case: &ExteriorCase, times: &[f64]) -> Result<BTreeMap<String, f64>> {
        let (eps, sol) = (case.eps, &case.solution);
        Ok(BTreeMap::from([(
            "eps_sup_ur_exterior".to_string(),
            eps * sup_abs(times, |t| sol.dr(t, eps))?,
        )]))
    }
}

/// Exterior problems keyed by name, as selected by `--bc`.
#[derive(Debug, Clone)]
pub struct ProblemRegistry {
    problems: BTreeMap<String, Arc<dyn ExteriorProblem>>,
}

impl ProblemRegistry {
    pub fn empty() -> Self {
        Self {
            problems: BTreeMap::new(),
        }
    }

    /// Neumann and Dirichlet built with the named cutoff family.
    pub fn with_cutoff(cutoff: &str) -> Result<Self> {
        let mut reg = Self::empty();
        reg.register(Arc::new(NeumannProblem::new(CutoffBeta::by_name(cutoff)?)));
        reg.register(Arc::new(DirichletProblem::new(CutoffChi::by_name(cutoff)?)));
        Ok(reg)
    }

    pub fn builtin() -> Self {
        Self::with_cutoff(CUTOFF_NAMES[0]).expect("builtin cutoff")
    }

    /// Registers under the problem's boundary-kind name, replacing any previous entry.
    pub fn register(&mut self, problem: Arc<dyn ExteriorProblem>) {
        self.problems.insert(problem.kind().name().to_string(), problem);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.problems.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ExteriorProblem>> {
        self.problems.get(&name.to_ascii_lowercase()).cloned().ok_or_else(|| {
            invalid(format!(
                "no exterior problem named '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn for_kind(&self, kind: BoundaryKind) -> Result<Arc<dyn ExteriorProblem>> {
        self.get(kind.name())
    }
}
