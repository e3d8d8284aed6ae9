#ifndef QSW_SOLVER_HPP
#define QSW_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qsw/energy.hpp"
#include "qsw/spectrum.hpp"

namespace qsw {

enum class SolveMode { MountainPass, LocalLinking, Multiplicity, Refine };

const char* to_string(SolveMode mode);

struct SolveOptions {
  double grad_tol = 1e-8;     // X-dual norm of Phi'
  double res_tol = 1e-6;      // relative PDE residual of u = f(v)
  int max_outer = 4000;       // minimax iterations
  double basin_tol = 1e-5;    // hand-off to Newton
  int stall_window = 200;     // minimax iterations without progress before giving up
  double trivial_tol = 1e-6;  // X norm below which a point counts as 0
  int path_points = 16;
  int max_path_points = 256;
  int max_newton = 30;
  int max_minres = 400;
  double dist_tol = 1e-3;     // relative L2 separation of distinct solutions
  double energy_sep = 1e-6;   // relative separation of critical values
  int extra_levels = 4;       // multiplicity: levels tried beyond the requested count
  double cerami_growth = 1e6;
  std::uint64_t seed = 20240611;
  // Two-grid mode: when 3 <= coarse_nodes < n, the minimax runs on a grid with
  // coarse_nodes nodes and Newton polishes the interpolated result on the full grid.
  Index coarse_nodes = 0;
};

struct IterationRecord {
  int iter = 0;
  double phi = 0.0;
  double grad_norm = 0.0;
  double rho = 0.0;
  std::string stage;
};

struct SolveReport {
  SolveMode mode = SolveMode::Refine;
  bool converged = false;
  bool trivial = false;
  std::string status;
  Field v;
  Field u;
  double phi = 0.0;
  double energy_J = 0.0;
  double grad_norm = 0.0;
  double pde_residual = 0.0;
  int morse_index = -1;  // negative eigenvalues of the discrete Hessian
  int sign_changes = 0;
  int level = 0;         // multiplicity: dimension of the maximised subspace
  int outer_iterations = 0;
  int newton_iterations = 0;
  double rho_floor = 0.0;  // min over iterates of rho^2 / |v|^2
  std::vector<IterationRecord> log;
};

/// Completes a report (u, energies, residual, Morse index) for the point v.
SolveReport make_report(const Energy& energy, const Field& v, SolveMode mode, const SolveOptions& opts);

/// Path-deformation mountain pass from 0 towards e = s phi_1 with Phi(e) < 0.
SolveReport mountain_pass_solve(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                const SolveOptions& opts = {}, const Field* warm = nullptr);

/// Local minimax: maximise over X^- (+) span{w}, descend in w, then Newton.
SolveReport local_linking_solve(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                const SolveOptions& opts = {}, const Field* warm = nullptr);

/// Newton on Phi'(v) = 0; MINRES (X-preconditioned) on the tridiagonal Hessian.
SolveReport newton_refine(const Problem& problem, const Grid& grid, const Field& v0, const SolveOptions& opts = {});

/// Interpolates a coarse-grid report onto `fine` and polishes it with Newton.
/// Mode, level and the coarse iterate log are carried over.
SolveReport transfer_and_refine(const Problem& problem, const Grid& coarse, const Grid& fine, const SolveReport& rep,
                                const SolveOptions& opts = {});

/// Pairwise test used by the multiplicity driver: relative L2 distance of
/// v_a from +-v_b at least dist_tol and critical values separated by energy_sep.
bool distinct_solutions(const Grid& grid, const SolveReport& a, const SolveReport& b, const SolveOptions& opts);

struct GrowthFit {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// |G(f(t))| <= C1 t^2 + C2 |t|^{p/2}: least-squares fit, then enlarged until
/// it bounds every sample.
GrowthFit fit_growth_bound(const Problem& problem, const TransformTable& tr = {});

struct LevelDiagnostics {
  int level = 0;
  bool converged = false;
  bool distinct = false;
  std::string support;  // "eigenmodes" or "previous solutions"
  std::string status;
};

struct MultiplicityReport {
  std::vector<SolveReport> solutions;  // ascending Phi
  std::vector<LevelDiagnostics> levels;
  GrowthFit growth;
  double eta = 0.0;
  Index k = 0;           // first index with eta - C1 beta_k^2 > 0
  double lambda_k = 0.0;  // eta - C1 beta_k^2
  bool complete = false;
  std::vector<double> negative_grad_norms;  // |Phi'(-v*)| per solution
};

MultiplicityReport multiplicity_search(const Problem& problem, const Grid& grid, const SpectralSplit& split, int count,
                                       const SolveOptions& opts = {});

struct ContinuationPoint {
  double omega = 0.0;
  Index negative_count = 0;
  bool degenerate = false;
  SolveMode mode = SolveMode::MountainPass;
  double shift = 0.0;
  bool warm_started = false;
  bool solved = false;
  SolveReport report;
};

/// V = U - omega along increasing omega; U is harmonic or quartic.
std::vector<ContinuationPoint> continuation_in_omega(const Problem& base, const Grid& grid,
                                                     const std::vector<double>& omegas, Index modes,
                                                     const SolveOptions& opts = {}, bool warm_start = true);

int count_sign_changes(const Field& u);

}  // namespace qsw

#endif  // QSW_SOLVER_HPP
