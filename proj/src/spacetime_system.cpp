#include "wavext/spacetime_system.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <thread>
#include <vector>

namespace wavext {

namespace {

using Complex = std::complex<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;

Eigen::Map<const Eigen::MatrixXd> as_matrix(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

void check_rhs(const KroneckerSum& system, const Eigen::VectorXd& rhs) {
  if (rhs.size() != system.size()) {
    throw std::invalid_argument("right-hand side has length " + std::to_string(rhs.size()) + ", expected " +
                                std::to_string(system.size()));
  }
}

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("WAVEXT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

KroneckerSum::KroneckerSum(Eigen::MatrixXd temporal_stiffness, Eigen::MatrixXd temporal_mass,
                           SparseMatrix spatial_mass, SparseMatrix spatial_stiffness)
    : temporal_stiffness_(std::move(temporal_stiffness)),
      temporal_mass_(std::move(temporal_mass)),
      spatial_mass_(std::move(spatial_mass)),
      spatial_stiffness_(std::move(spatial_stiffness)) {
  const Eigen::Index nt = temporal_stiffness_.rows();
  const Eigen::Index mx = spatial_mass_.rows();
  if (temporal_stiffness_.cols() != nt || temporal_mass_.rows() != nt || temporal_mass_.cols() != nt) {
    throw std::invalid_argument("KroneckerSum: temporal factors must be square and of equal size");
  }
  if (spatial_mass_.cols() != mx || spatial_stiffness_.rows() != mx || spatial_stiffness_.cols() != mx) {
    throw std::invalid_argument("KroneckerSum: spatial factors must be square and of equal size");
  }
}

Eigen::VectorXd KroneckerSum::apply(const Eigen::VectorXd& x) const {
  if (x.size() != size()) throw std::invalid_argument("KroneckerSum::apply: dimension mismatch");
  const auto X = as_matrix(x, num_spatial(), num_temporal());
  Eigen::MatrixXd Y = spatial_mass_ * (X * temporal_stiffness_.transpose());
  Y.noalias() += spatial_stiffness_ * (X * temporal_mass_.transpose());
  return Eigen::Map<Eigen::VectorXd>(Y.data(), Y.size());
}

std::int64_t KroneckerSum::assembled_nonzeros() const {
  const SparseMatrix pattern = spatial_mass_ + spatial_stiffness_;
  return static_cast<std::int64_t>(num_temporal()) * num_temporal() * pattern.nonZeros();
}

SparseMatrix KroneckerSum::assemble() const {
  const Eigen::Index nt = num_temporal();
  const Eigen::Index mx = num_spatial();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nt * nt * (spatial_mass_.nonZeros() + spatial_stiffness_.nonZeros())));
  for (Eigen::Index k = 0; k < nt; ++k) {
    for (Eigen::Index l = 0; l < nt; ++l) {
      const double a = temporal_stiffness_(l, k);
      const double m = temporal_mass_(l, k);
      for (Eigen::Index c = 0; c < mx; ++c) {
        for (SparseMatrix::InnerIterator it(spatial_mass_, c); it; ++it) {
          triplets.emplace_back(l * mx + it.row(), k * mx + c, a * it.value());
        }
        for (SparseMatrix::InnerIterator it(spatial_stiffness_, c); it; ++it) {
          triplets.emplace_back(l * mx + it.row(), k * mx + c, m * it.value());
        }
      }
    }
  }
  SparseMatrix K(size(), size());
  K.setFromTriplets(triplets.begin(), triplets.end());
  K.makeCompressed();
  return K;
}

KroneckerSum build_system(const TemporalMatrices& tmats, const SpatialMatrices& smats) {
  return KroneckerSum(tmats.stiffness, tmats.mass, smats.mass, smats.stiffness);
}

Eigen::VectorXd assemble_load(const Eigen::VectorXd& cell_averages, const TemporalMatrices& tmats,
                              const SpatialMatrices& smats) {
  const Eigen::Index nt = tmats.size();
  const Eigen::Index nx = smats.num_elements();
  if (cell_averages.size() != nt * nx) {
    throw std::invalid_argument("assemble_load: expected " + std::to_string(nt * nx) + " cell averages, got " +
                                std::to_string(cell_averages.size()));
  }
  if (!cell_averages.allFinite()) throw std::domain_error("assemble_load: non-finite source values");
  const auto F = as_matrix(cell_averages, nx, nt);
  // load[j, m] = sum_{i,l} C_x[j,i] F[i,l] C_t[m,l]
  Eigen::MatrixXd L = smats.moment * (F * tmats.moment.transpose());
  return Eigen::Map<Eigen::VectorXd>(L.data(), L.size());
}

double relative_residual(const KroneckerSum& system, const Eigen::VectorXd& u, const Eigen::VectorXd& rhs) {
  const double r = (system.apply(u) - rhs).norm();
  const double b = rhs.norm();
  return b > 0.0 ? r / b : r;
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::tensor: return "tensor";
    case SolverKind::assembled: return "assembled";
    case SolverKind::automatic: return "auto";
  }
  return "auto";
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "tensor") return SolverKind::tensor;
  if (name == "assembled") return SolverKind::assembled;
  if (name == "auto") return SolverKind::automatic;
  throw std::invalid_argument("unknown solver '" + name + "' (expected tensor, assembled or auto)");
}

SpaceTimeSolution solve_tensor(const KroneckerSum& system, const Eigen::VectorXd& rhs, const SolverOptions& options) {
  check_rhs(system, rhs);
  const Eigen::Index nt = system.num_temporal();
  const Eigen::Index mx = system.num_spatial();

  SpaceTimeSolution sol;
  sol.num_temporal = nt;
  sol.num_spatial = mx;
  sol.solver = SolverKind::tensor;
  if (rhs.isZero(0.0)) {
    sol.coefficients = Eigen::VectorXd::Zero(rhs.size());
    return sol;
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> mass_lu(system.temporal_mass());
  const Eigen::MatrixXd pencil = mass_lu.solve(system.temporal_stiffness());
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(pencil);
  if (eig.info() != Eigen::Success) throw TensorSolveError("solve_tensor: temporal eigensolver failed");
  const Eigen::VectorXcd lambda = eig.eigenvalues();
  const Eigen::MatrixXcd Z = eig.eigenvectors();

  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(Z).singularValues();
  sol.eigenvector_condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                       : std::numeric_limits<double>::infinity();
  if (!(sol.eigenvector_condition <= options.condition_limit)) {
    throw TensorSolveError("solve_tensor: temporal eigenvector matrix condition " +
                           std::to_string(sol.eigenvector_condition) + " exceeds limit");
  }

  // W = Z^{-1} M_t^{-1}; transformed right-hand sides R W^T, one column per eigenvalue.
  const Eigen::PartialPivLU<Eigen::MatrixXcd> z_lu(Z);
  const Eigen::MatrixXcd W =
      z_lu.solve(mass_lu.inverse().cast<Complex>());
  const Eigen::MatrixXcd R = as_matrix(rhs, mx, nt).cast<Complex>() * W.transpose();

  const ComplexSparse mass = system.spatial_mass().cast<Complex>();
  const ComplexSparse stiff = system.spatial_stiffness().cast<Complex>();

  // Eigenvalues of a real matrix come in adjacent conjugate pairs; the second
  // member of a pair reuses the conjugated solution of the first.
  std::vector<Eigen::Index> primary;
  std::vector<bool> is_conjugate(static_cast<std::size_t>(nt), false);
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (i > 0 && !is_conjugate[static_cast<std::size_t>(i - 1)] && lambda[i].imag() != 0.0 &&
        lambda[i] == std::conj(lambda[i - 1])) {
      is_conjugate[static_cast<std::size_t>(i)] = true;
    } else {
      primary.push_back(i);
    }
  }

  Eigen::MatrixXcd Y(mx, nt);
  const int threads = std::clamp<int>(options.threads > 0 ? options.threads : worker_threads(), 1,
                                      static_cast<int>(std::max<std::size_t>(1, primary.size())));
  std::vector<std::string> failures(static_cast<std::size_t>(threads));
  auto worker = [&](int id) {
    Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu;
    ComplexSparse shifted = mass + stiff;
    lu.analyzePattern(shifted);
    for (std::size_t p = static_cast<std::size_t>(id); p < primary.size(); p += static_cast<std::size_t>(threads)) {
      const Eigen::Index i = primary[p];
      shifted = lambda[i] * mass + stiff;
      lu.factorize(shifted);
      if (lu.info() != Eigen::Success) {
        failures[static_cast<std::size_t>(id)] = "shifted system " + std::to_string(i) + " is singular";
        return;
      }
      Y.col(i) = lu.solve(R.col(i));
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < threads; ++id) pool.emplace_back(worker, id);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw TensorSolveError("solve_tensor: " + f);
  }
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (is_conjugate[static_cast<std::size_t>(i)]) Y.col(i) = Y.col(i - 1).conjugate();
  }

  const Eigen::MatrixXd U = (Y * Z.transpose()).real();
  sol.coefficients = Eigen::Map<const Eigen::VectorXd>(U.data(), U.size());
  sol.relative_residual = relative_residual(system, sol.coefficients, rhs);
  if (!sol.coefficients.allFinite() || !(sol.relative_residual <= options.residual_limit)) {
    throw TensorSolveError("solve_tensor: relative residual " + std::to_string(sol.relative_residual) +
                           " exceeds limit");
  }
  return sol;
}

std::int64_t assembled_memory_estimate(const KroneckerSum& system) {
  // Triplets (16 B) and compressed storage (12 B) of K_h, plus LU factors
  // taken as four times the matrix storage.
  const std::int64_t nnz = system.assembled_nonzeros();
  return nnz * (16 + 12 + 4 * 12);
}

SpaceTimeSolution solve_assembled(const KroneckerSum& system, const Eigen::VectorXd& rhs,
                                  const SolverOptions& options) {
  check_rhs(system, rhs);
  const std::int64_t estimate = assembled_memory_estimate(system);
  if (estimate > options.memory_budget) {
    throw MemoryBudgetError("solve_assembled: estimated " + std::to_string(estimate) + " bytes exceeds budget of " +
                            std::to_string(options.memory_budget));
  }
  SpaceTimeSolution sol;
  sol.num_temporal = system.num_temporal();
  sol.num_spatial = system.num_spatial();
  sol.solver = SolverKind::assembled;
  const SparseMatrix K = system.assemble();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("solve_assembled: factorization failed (K_h should be positive definite)");
  }
  sol.coefficients = lu.solve(rhs);
  sol.relative_residual = relative_residual(system, sol.coefficients, rhs);
  return sol;
}

SpaceTimeSolution solve(const KroneckerSum& system, const Eigen::VectorXd& rhs, const SolverOptions& options) {
  switch (options.kind) {
    case SolverKind::tensor: return solve_tensor(system, rhs, options);
    case SolverKind::assembled: return solve_assembled(system, rhs, options);
    case SolverKind::automatic:
      try {
        return solve_tensor(system, rhs, options);
      } catch (const TensorSolveError&) {
        return solve_assembled(system, rhs, options);
      }
  }
  throw std::logic_error("solve: unknown solver kind");
}

void write_solution(std::ostream& os, const SpaceTimeSolution& sol) {
  os << "wavext-sol v1\n";
  os << "ordering time-major g=(l-1)*M_x+j\n";
  os << "n_t " << sol.num_temporal << " m_x " << sol.num_spatial << '\n';
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < sol.coefficients.size(); ++i) os << sol.coefficients[i] << '\n';
  os.precision(old);
}

SpaceTimeSolution read_solution(std::istream& is) {
  std::string magic, version, key, ordering, nt_key, mx_key;
  if (!(is >> magic >> version) || magic != "wavext-sol" || version != "v1") {
    throw std::runtime_error("solution file: missing 'wavext-sol v1' header");
  }
  SpaceTimeSolution sol;
  if (!(is >> key >> ordering) || key != "ordering" || ordering != "time-major") {
    throw std::runtime_error("solution file: unsupported ordering");
  }
  std::getline(is, key);
  if (!(is >> nt_key >> sol.num_temporal >> mx_key >> sol.num_spatial) || nt_key != "n_t" || mx_key != "m_x") {
    throw std::runtime_error("solution file: malformed dimension line");
  }
  sol.coefficients.resize(sol.num_temporal * sol.num_spatial);
  for (Eigen::Index i = 0; i < sol.coefficients.size(); ++i) {
    if (!(is >> sol.coefficients[i])) throw std::runtime_error("solution file: truncated coefficient list");
  }
  return sol;
}

}  // namespace wavext
