#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hyperkl/constructors.hpp"
#include "hyperkl/hypergroup.hpp"
#include "hyperkl/measure.hpp"
#include "hyperkl/rational.hpp"

namespace hyperkl {

/// Dense exact-rational matrix, row major.
using RatMat = std::vector<std::vector<Rat>>;

RatMat rat_mat_identity(int n);
RatMat rat_mat_mul(const RatMat& a, const RatMat& b);
bool rat_mat_equal(const RatMat& a, const RatMat& b);

/// Matrix of the Markov operator f -> (x -> sum_y lambda(y) f(x*y)) on a
/// finite hypergroup: row x is the measure delta_x * lambda, so
/// M[x][z] = sum_y lambda(y) c(x, y, z) and row 0 recovers lambda itself.
RatMat operator_matrix_exact(const FiniteHypergroup& h,
                             const Measure<FiniteHypergroup, Rat>& lambda);

/// Adjoint with respect to <f, g> = sum_x f(x) g(x) m(x), m the Haar
/// weights: A* = D^-1 A^T D with D = diag(m).
RatMat rat_mat_adjoint(const FiniteHypergroup& h, const RatMat& a);

/// Convolution operator P_lambda on L2 of a finite hypergroup with the
/// Haar-weighted inner product. Keeps the generating measure so matrix-level
/// results can be cross-checked against exact measure arithmetic.
class ConvOperator {
 public:
  ConvOperator(const FiniteHypergroup& host, Measure<FiniteHypergroup, Rat> lambda);

  const FiniteHypergroup& host() const { return *host_; }
  const Measure<FiniteHypergroup, Rat>& measure() const { return lambda_; }
  int size() const { return static_cast<int>(m_.rows()); }

  const Eigen::MatrixXd& matrix() const { return m_; }

  /// D^-1 M^T D, the adjoint in the Haar inner product. Computed from the
  /// matrix alone; tests compare it with operator_of(involute(lambda)).
  Eigen::MatrixXd adjoint_matrix() const;

  /// B = D^(1/2) M D^(-1/2). Symmetric-friendly coordinates: the Haar inner
  /// product becomes the standard one, and the adjoint becomes B^T.
  Eigen::MatrixXd euclidean() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return m_ * f; }

  double m_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
  double m_norm(const Eigen::VectorXd& f) const;

  /// Operator norm in the Haar geometry, i.e. the largest singular value
  /// of the euclidean form. Should be <= 1 for probability measures.
  double m_operator_norm() const;

  const Eigen::VectorXd& haar_weights() const { return d_; }

 private:
  const FiniteHypergroup* host_;
  Measure<FiniteHypergroup, Rat> lambda_;
  Eigen::MatrixXd m_;
  Eigen::VectorXd d_, d_sqrt_, d_inv_sqrt_;
};

/// Builds P_lambda. Rejects non-probability measures unless
/// allow_sub_probability is set (then any mass <= 1 passes).
ConvOperator operator_of(const FiniteHypergroup& h,
                         const Measure<FiniteHypergroup, Rat>& lambda,
                         bool allow_sub_probability = false);

struct QLimit {
  Eigen::MatrixXd q;        // limit of adj(P)^n P^n, Markov coordinates
  Eigen::MatrixXd s;        // same limit conjugated by diag(sqrt haar); symmetric PSD
  int iterations = 0;       // steps taken until the gap fell below tol
  double last_gap = 0;      // Frobenius gap at the final step
  double min_monotonicity = 0;  // most negative eigenvalue seen in S_n - S_{n+1}
};

/// Iterates S_0 = I, S_{n+1} = B^T S_n B (B the euclidean form of P), the
/// conjugated version of A_{n+1} = adj(P) A_n P, stopping when consecutive
/// iterates differ by at most tol in Frobenius norm. Each step asserts the
/// decrease S_{n+1} <= S_n up to a 1e-9 eigenvalue slack; a genuine
/// violation signals a broken operator and throws Error. Exceeding n_max
/// throws ConvergenceError carrying the last gap.
QLimit q_limit(const ConvOperator& p, double tol = 1e-10, int n_max = 100000);

struct DecomposeOptions {
  double q_tol = 1e-10;         // stopping tolerance for the Q iteration
  double kl_tol = 1e-8;         // residual bound for the projector verdict
  int n_max = 100000;           // iteration cap for the Q iteration
  double partition_tol = 1e-6;  // level-set merge tolerance
};

struct DecompositionResult {
  Eigen::MatrixXd q;          // limit operator, Markov coordinates
  Eigen::MatrixXd s;          // symmetric PSD form of q
  Eigen::VectorXd eigenvalues;  // spectrum of s, descending
  // Columns are basis functions in point coordinates, orthonormal for the
  // Haar inner product.
  Eigen::MatrixXd sigma_d_basis;  // eigenvalue ~ 1: the deterministic part
  Eigen::MatrixXd e0_basis;       // eigenvalue ~ 0: the vanishing part
  std::vector<std::vector<int>> partition;  // joint level sets of sigma_d_basis
  bool kl_holds = false;
  double residual = 0;  // spectral norm of q^2 - q
  int iterations = 0;
  Eigen::VectorXd rho;  // row of q at the identity: the limit measure
};

/// Runs the Q iteration and splits L2 into the eigenvalue-1 part (functions
/// whose iterates keep full norm) and the kernel (functions driven to 0).
/// kl_holds means the two parts exhaust the space, i.e. Q is a projection
/// up to kl_tol.
DecompositionResult decompose(const FiniteHypergroup& h,
                              const Measure<FiniteHypergroup, Rat>& lambda,
                              const DecomposeOptions& opts = {});

/// True when P commutes with its adjoint. Decided by the matrix commutator
/// norm against tol and cross-checked against the exact measure identity
/// involute(lambda) * lambda = lambda * involute(lambda); a mismatch between
/// the two routes throws Error.
bool is_normal(const ConvOperator& p, double tol = 1e-8);

/// Deterministic partition read off the limit measure: x and y share a
/// block iff delta_x * rho = delta_y * rho. Exact overload groups by
/// equality; float tolerance overload merges rows at l1 distance <= tol.
std::vector<std::vector<int>> partition_from_rho(const FiniteHypergroup& h,
                                                 const Measure<FiniteHypergroup, Rat>& rho);
std::vector<std::vector<int>> partition_from_rho(const FiniteHypergroup& h,
                                                 const Measure<FiniteHypergroup, Rat>& rho,
                                                 double tol);

struct ShiftWindow {
  int m_lo = -3;
  int m_hi = 3;
  int n_max = 4;  // powers of lambda checked: n = 1..n_max
};

/// Verifies the shift action of a one-level-supported measure on the
/// integer-times-finite-group host: applying P_(lambda^n) to the indicator
/// of level m gives the indicator of level m - n, exactly, at every point
/// of the window. Requires the fiber to be a group and every atom of lambda
/// to sit on level 1; anything else is a PreconditionError.
bool bilateral_shift_check(const ZxFHypergroup& host,
                           const Measure<ZxFHypergroup, Rat>& lambda,
                           const ShiftWindow& w = {});

/// Deterministic partition restricted to a window of the infinite host:
/// keys (m, f) with m_lo <= m <= m_hi grouped by the exact measures
/// delta_x * rho_n, rho_n = involute(lambda^n) * lambda^n, n = 1..n_powers.
/// For a one-level-supported lambda with group fiber the blocks come out as
/// whole levels {m} x F.
std::vector<std::vector<ZxFHypergroup::key_type>> zxf_partition_window(
    const ZxFHypergroup& host, const Measure<ZxFHypergroup, Rat>& lambda,
    int m_lo, int m_hi, int n_powers = 2);

struct CrossCheckResult {
  DecompositionResult dec;
  LimitVerdict<FiniteHypergroup, Rat> verdict;  // from the measure sequence
  bool rho_idempotent = false;
  double rho_residual = 0;  // l1 residual of rho * rho vs rho
  double q_vs_rho = 0;      // Frobenius gap between q and the matrix of rho
  bool escape_seen = false;
  bool agree = false;
};

/// Runs both routes to the same verdict: the operator iteration (decompose)
/// and the measure sequence (alternating_sequence + limit_detect +
/// is_idempotent), then checks they tell one story: identical yes/no on the
/// decomposition, no escape on a finite host, and Q equal to the operator
/// of the limit measure within cross_tol.
CrossCheckResult cross_check(const FiniteHypergroup& h,
                             const Measure<FiniteHypergroup, Rat>& lambda,
                             const DecomposeOptions& opts = {},
                             int sequence_cap = 400,
                             const LimitOptions& lopts = {},
                             double cross_tol = 1e-8);

}  // namespace hyperkl
