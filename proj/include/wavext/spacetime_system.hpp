#pragma once

#include "wavext/spatial_fem.hpp"
#include "wavext/temporal_hilbert.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wavext {

/// K_h = A_t (x) M_x + M_t (x) A_x, kept in factored form.
/// Global index g = l * M_x + j (time-major, 0-based), so a vector reshaped
/// column-major to M_x x N_t has one column per temporal dof.
class KroneckerSum {
 public:
  KroneckerSum(Eigen::MatrixXd temporal_stiffness, Eigen::MatrixXd temporal_mass, SparseMatrix spatial_mass,
               SparseMatrix spatial_stiffness);

  Eigen::Index num_temporal() const { return temporal_stiffness_.rows(); }
  Eigen::Index num_spatial() const { return spatial_mass_.rows(); }
  Eigen::Index size() const { return num_temporal() * num_spatial(); }

  const Eigen::MatrixXd& temporal_stiffness() const { return temporal_stiffness_; }
  const Eigen::MatrixXd& temporal_mass() const { return temporal_mass_; }
  const SparseMatrix& spatial_mass() const { return spatial_mass_; }
  const SparseMatrix& spatial_stiffness() const { return spatial_stiffness_; }

  /// y = K_h x computed factor-wise.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Explicit sparse K_h (block-dense in time).
  SparseMatrix assemble() const;
  /// Number of nonzeros of the assembled K_h.
  std::int64_t assembled_nonzeros() const;

 private:
  Eigen::MatrixXd temporal_stiffness_;
  Eigen::MatrixXd temporal_mass_;
  SparseMatrix spatial_mass_;
  SparseMatrix spatial_stiffness_;
};

KroneckerSum build_system(const TemporalMatrices& tmats, const SpatialMatrices& smats);

/// Right-hand side <Q_h^0 f, H_T w_h> from cell averages indexed (l-1) * N_x + i:
/// load = (C_t (x) C_x) f_bar.
Eigen::VectorXd assemble_load(const Eigen::VectorXd& cell_averages, const TemporalMatrices& tmats,
                              const SpatialMatrices& smats);

template <typename SpatialMesh>
Eigen::VectorXd assemble_load(const SpaceTimeFunction& f, const TemporalMatrices& tmats, const SpatialMatrices& smats,
                              const SpatialMesh& smesh, const TemporalMesh& tmesh, int quad_order) {
  return assemble_load(project_piecewise_constant(f, smesh, tmesh, quad_order), tmats, smats);
}

enum class SolverKind { tensor, assembled, automatic };

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);

struct SolverOptions {
  SolverKind kind = SolverKind::automatic;
  /// Largest accepted 2-norm condition number of the temporal eigenvector matrix.
  double condition_limit = 1e10;
  /// Tensor results with a larger relative residual are rejected.
  double residual_limit = 1e-8;
  /// Upper bound on the estimated footprint of the assembled solver.
  std::int64_t memory_budget = std::int64_t{2} << 30;
  /// Worker threads for the shifted solves; 0 means WAVEXT_THREADS or hardware.
  int threads = 0;
};

struct SpaceTimeSolution {
  /// Coefficients in time-major order, length N_t * M_x.
  Eigen::VectorXd coefficients;
  Eigen::Index num_temporal = 0;
  Eigen::Index num_spatial = 0;
  SolverKind solver = SolverKind::tensor;
  double relative_residual = 0.0;
  /// Condition number of the temporal eigenvector matrix (tensor path only).
  double eigenvector_condition = 0.0;
};

/// Thrown when the temporal pencil cannot be diagonalised reliably.
class TensorSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the assembled system would exceed the memory budget.
class MemoryBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Diagonalises the pencil A_t Z = M_t Z Lambda and solves the N_t shifted
/// spatial systems (lambda_i M_x + A_x) y_i = r_i by sparse LU.
SpaceTimeSolution solve_tensor(const KroneckerSum& system, const Eigen::VectorXd& rhs,
                               const SolverOptions& options = {});

/// Estimated peak bytes for assembling and factorising K_h.
std::int64_t assembled_memory_estimate(const KroneckerSum& system);

/// Sparse LU on the explicitly assembled K_h.
SpaceTimeSolution solve_assembled(const KroneckerSum& system, const Eigen::VectorXd& rhs,
                                  const SolverOptions& options = {});

/// Dispatch on options.kind; `automatic` tries tensor and falls back to assembled.
SpaceTimeSolution solve(const KroneckerSum& system, const Eigen::VectorXd& rhs, const SolverOptions& options = {});

/// Relative residual ||K_h u - rhs|| / ||rhs|| (absolute when rhs = 0).
double relative_residual(const KroneckerSum& system, const Eigen::VectorXd& u, const Eigen::VectorXd& rhs);

/// Plain-text "wavext-sol v1" dump.
void write_solution(std::ostream& os, const SpaceTimeSolution& sol);
SpaceTimeSolution read_solution(std::istream& is);

/// Worker count from WAVEXT_THREADS, else the hardware concurrency.
int worker_threads();

}  // namespace wavext
