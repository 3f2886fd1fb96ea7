#include "hyperkl/operator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "hyperkl/errors.hpp"

namespace hyperkl {

RatMat rat_mat_identity(int n) {
  RatMat a(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return a;
}

RatMat rat_mat_mul(const RatMat& a, const RatMat& b) {
  const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), inner = b.size();
  RatMat out(n, std::vector<Rat>(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != inner) throw PreconditionError("rat_mat_mul: shape mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      const Rat& aik = a[i][k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += aik * b[k][j];
    }
  }
  return out;
}

bool rat_mat_equal(const RatMat& a, const RatMat& b) { return a == b; }

RatMat operator_matrix_exact(const FiniteHypergroup& h,
                             const Measure<FiniteHypergroup, Rat>& lambda) {
  const int n = h.size();
  RatMat out(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
  for (int x = 0; x < n; ++x) {
    for (const auto& [y, w] : lambda.atoms()) {
      for (int z = 0; z < n; ++z) {
        const Rat& c = h.c(x, y, z);
        if (c != 0) out[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)] += w * c;
      }
    }
  }
  return out;
}

RatMat rat_mat_adjoint(const FiniteHypergroup& h, const RatMat& a) {
  const int n = h.size();
  const auto& m = h.haar();
  RatMat out(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
          m[static_cast<std::size_t>(j)] / m[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

ConvOperator::ConvOperator(const FiniteHypergroup& host, Measure<FiniteHypergroup, Rat> lambda)
    : host_(&host), lambda_(std::move(lambda)) {
  const int n = host.size();
  const RatMat exact = operator_matrix_exact(host, lambda_);
  m_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m_(i, j) = to_double(exact[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  d_.resize(n);
  d_sqrt_.resize(n);
  d_inv_sqrt_.resize(n);
  const auto& haar = host.haar_d();
  for (int i = 0; i < n; ++i) {
    d_(i) = haar[static_cast<std::size_t>(i)];
    d_sqrt_(i) = std::sqrt(d_(i));
    d_inv_sqrt_(i) = 1.0 / d_sqrt_(i);
  }
}

Eigen::MatrixXd ConvOperator::adjoint_matrix() const {
  return d_.cwiseInverse().asDiagonal() * m_.transpose() * d_.asDiagonal();
}

Eigen::MatrixXd ConvOperator::euclidean() const {
  return d_sqrt_.asDiagonal() * m_ * d_inv_sqrt_.asDiagonal();
}

double ConvOperator::m_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  return (f.array() * g.array() * d_.array()).sum();
}

double ConvOperator::m_norm(const Eigen::VectorXd& f) const {
  return std::sqrt(std::max(0.0, m_inner(f, f)));
}

double ConvOperator::m_operator_norm() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(euclidean());
  return svd.singularValues()(0);
}

ConvOperator operator_of(const FiniteHypergroup& h,
                         const Measure<FiniteHypergroup, Rat>& lambda,
                         bool allow_sub_probability) {
  if (!h.valid()) throw PreconditionError("operator_of requires a validated hypergroup");
  if (&lambda.host() != &h) throw PreconditionError("operator_of: measure lives on another host");
  const Rat mass = lambda.mass();
  if (allow_sub_probability) {
    if (mass > 1) throw PreconditionError("operator_of: mass exceeds 1");
  } else if (mass != 1) {
    throw PreconditionError("operator_of requires a probability measure (pass the sub-probability flag to relax)");
  }
  return ConvOperator(h, lambda);
}

namespace {

double min_eigenvalue_sym(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

QLimit q_limit(const ConvOperator& p, double tol, int n_max) {
  const Eigen::MatrixXd b = p.euclidean();
  const int n = p.size();
  QLimit out;
  out.min_monotonicity = 0;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  for (int it = 1; it <= n_max; ++it) {
    Eigen::MatrixXd next = b.transpose() * s * b;
    next = 0.5 * (next + next.transpose().eval());  // exact self-adjointness drifts in floats
    const Eigen::MatrixXd diff = s - next;
    const double low = min_eigenvalue_sym(diff);
    out.min_monotonicity = std::min(out.min_monotonicity, low);
    if (low < -1e-9) {
      throw Error("q_limit: iterate increased; the operator is not an m-contraction");
    }
    out.last_gap = diff.norm();
    s = std::move(next);
    out.iterations = it;
    if (out.last_gap <= tol) {
      out.s = s;
      out.q = p.haar_weights().cwiseSqrt().cwiseInverse().asDiagonal() * s *
              p.haar_weights().cwiseSqrt().asDiagonal();
      return out;
    }
  }
  throw ConvergenceError("q_limit: gap still above tolerance at the iteration cap",
                         out.last_gap, n_max);
}

namespace {

/// Groups row vectors whose pairwise max-abs difference is <= tol, taking
/// the transitive closure so the result is a genuine partition. Blocks come
/// back sorted by least member.
std::vector<std::vector<int>> merge_rows(const Eigen::MatrixXd& rows, double tol) {
  const int n = static_cast<int>(rows.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = rows.cols() == 0
                             ? 0.0
                             : (rows.row(i) - rows.row(j)).cwiseAbs().maxCoeff();
      if (gap <= tol) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }
    }
  }
  std::map<int, std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : blocks) out.push_back(std::move(members));
  return out;
}

}  // namespace

DecompositionResult decompose(const FiniteHypergroup& h,
                              const Measure<FiniteHypergroup, Rat>& lambda,
                              const DecomposeOptions& opts) {
  const ConvOperator p = operator_of(h, lambda);
  const QLimit ql = q_limit(p, opts.q_tol, opts.n_max);
  const int n = h.size();

  DecompositionResult out;
  out.q = ql.q;
  out.s = ql.s;
  out.iterations = ql.iterations;
  out.rho = ql.q.row(0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ql.s);
  if (es.info() != Eigen::Success) throw Error("decompose: eigensolver failed");
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const Eigen::MatrixXd vecs = es.eigenvectors();

  out.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) out.eigenvalues(i) = ev(n - 1 - i);

  double res = 0;
  for (int i = 0; i < n; ++i) {
    if (ev(i) < -1e-8 || ev(i) > 1 + 1e-8) {
      throw Error("decompose: limit spectrum left [0, 1]");
    }
    res = std::max(res, std::abs(ev(i) * ev(i) - ev(i)));
  }
  out.residual = res;  // spectral norm of s^2 - s
  out.kl_holds = res <= opts.kl_tol;

  const double hi = 1.0 - 10.0 * opts.kl_tol;
  const double lo = 10.0 * opts.kl_tol;
  std::vector<int> ones, zeros;
  for (int i = 0; i < n; ++i) {
    if (ev(i) >= hi) ones.push_back(i);
    else if (ev(i) <= lo) zeros.push_back(i);
  }
  const Eigen::VectorXd dinv = p.haar_weights().cwiseSqrt().cwiseInverse();
  auto to_functions = [&](const std::vector<int>& cols) {
    Eigen::MatrixXd basis(n, static_cast<int>(cols.size()));
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      basis.col(j) = dinv.asDiagonal() * vecs.col(cols[static_cast<std::size_t>(j)]);
    }
    return basis;
  };
  out.sigma_d_basis = to_functions(ones);
  out.e0_basis = to_functions(zeros);

  const double scale = out.sigma_d_basis.size() == 0
                           ? 1.0
                           : std::max(1.0, out.sigma_d_basis.cwiseAbs().maxCoeff());
  out.partition = merge_rows(out.sigma_d_basis, opts.partition_tol * scale);
  return out;
}

bool is_normal(const ConvOperator& p, double tol) {
  const Eigen::MatrixXd a = p.adjoint_matrix();
  const double res = (a * p.matrix() - p.matrix() * a).norm();
  const bool matrix_says = res <= tol;

  const auto& lam = p.measure();
  const auto check = lam.involute().convolve(lam);
  const auto other = lam.convolve(lam.involute());
  const bool exact_says = (check == other);

  if (matrix_says != exact_says) {
    throw Error("is_normal: matrix and measure routes disagree");
  }
  return matrix_says;
}

std::vector<std::vector<int>> partition_from_rho(const FiniteHypergroup& h,
                                                 const Measure<FiniteHypergroup, Rat>& rho) {
  const int n = h.size();
  std::vector<Measure<FiniteHypergroup, Rat>> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    rows.push_back(Measure<FiniteHypergroup, Rat>::point(h, x).convolve(rho));
  }
  std::vector<std::vector<int>> out;
  std::vector<int> block_of(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < n; ++x) {
    if (block_of[static_cast<std::size_t>(x)] >= 0) continue;
    out.push_back({x});
    block_of[static_cast<std::size_t>(x)] = static_cast<int>(out.size()) - 1;
    for (int y = x + 1; y < n; ++y) {
      if (block_of[static_cast<std::size_t>(y)] < 0 &&
          rows[static_cast<std::size_t>(x)] == rows[static_cast<std::size_t>(y)]) {
        out.back().push_back(y);
        block_of[static_cast<std::size_t>(y)] = block_of[static_cast<std::size_t>(x)];
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> partition_from_rho(const FiniteHypergroup& h,
                                                 const Measure<FiniteHypergroup, Rat>& rho,
                                                 double tol) {
  const int n = h.size();
  Eigen::MatrixXd rows(n, n);
  for (int x = 0; x < n; ++x) {
    const auto rowm = Measure<FiniteHypergroup, Rat>::point(h, x).convolve(rho);
    for (int z = 0; z < n; ++z) rows(x, z) = to_double(rowm(z));
  }
  return merge_rows(rows, tol);
}

bool bilateral_shift_check(const ZxFHypergroup& host,
                           const Measure<ZxFHypergroup, Rat>& lambda,
                           const ShiftWindow& w) {
  if (&lambda.host() != &host) {
    throw PreconditionError("bilateral_shift_check: measure lives on another host");
  }
  if (!is_group_structure(host.fiber())) {
    throw PreconditionError("bilateral_shift_check: fiber must be a group");
  }
  if (!lambda.is_probability()) {
    throw PreconditionError("bilateral_shift_check: lambda must be a probability");
  }
  for (const auto& [key, wt] : lambda.atoms()) {
    if (key.first != 1) {
      throw PreconditionError(
          "bilateral_shift_check: lambda must be supported on the level-1 coset");
    }
  }
  using M = Measure<ZxFHypergroup, Rat>;
  std::vector<M> powers{lambda};
  for (int k = 2; k <= w.n_max; ++k) powers.push_back(powers.back().convolve(lambda));

  const int fsize = host.fiber().size();
  for (int k = 1; k <= w.n_max; ++k) {
    for (const auto& [key, wt] : powers[static_cast<std::size_t>(k - 1)].atoms()) {
      if (key.first != k) return false;  // power escaped its level
    }
    for (std::int64_t lev = w.m_lo - w.n_max - 1; lev <= w.m_hi + 1; ++lev) {
      for (int f = 0; f < fsize; ++f) {
        const M step = M::point(host, {lev, f}).convolve(powers[static_cast<std::size_t>(k - 1)]);
        // (P_(lambda^k) indicator_m)(x) = (delta_x * lambda^k)(level m)
        std::map<std::int64_t, Rat> by_level;
        for (const auto& [key, wt] : step.atoms()) by_level[key.first] += wt;
        for (int m = w.m_lo; m <= w.m_hi; ++m) {
          const Rat expect = (lev == static_cast<std::int64_t>(m) - k) ? Rat(1) : Rat(0);
          Rat got(0);
          if (auto it = by_level.find(m); it != by_level.end()) got = it->second;
          if (got != expect) return false;
        }
      }
    }
  }
  return true;
}

std::vector<std::vector<ZxFHypergroup::key_type>> zxf_partition_window(
    const ZxFHypergroup& host, const Measure<ZxFHypergroup, Rat>& lambda,
    int m_lo, int m_hi, int n_powers) {
  using M = Measure<ZxFHypergroup, Rat>;
  using Key = ZxFHypergroup::key_type;
  if (&lambda.host() != &host) {
    throw PreconditionError("zxf_partition_window: measure lives on another host");
  }
  const auto seq = alternating_sequence(lambda, n_powers);
  if (static_cast<int>(seq.entries.size()) < n_powers) {
    throw BudgetError("zxf_partition_window: sequence truncated before n_powers");
  }

  std::vector<Key> window;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    for (int f = 0; f < host.fiber().size(); ++f) window.push_back({m, f});
  }
  std::vector<std::vector<M>> rows;
  rows.reserve(window.size());
  for (const Key& x : window) {
    std::vector<M> row;
    for (int k = 0; k < n_powers; ++k) {
      row.push_back(M::point(host, x).convolve(seq.entries[static_cast<std::size_t>(k)]));
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::vector<Key>> out;
  std::vector<int> block_of(window.size(), -1);
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (block_of[i] >= 0) continue;
    out.push_back({window[i]});
    block_of[i] = static_cast<int>(out.size()) - 1;
    for (std::size_t j = i + 1; j < window.size(); ++j) {
      if (block_of[j] < 0 && rows[i] == rows[j]) {
        out.back().push_back(window[j]);
        block_of[j] = block_of[i];
      }
    }
  }
  return out;
}

CrossCheckResult cross_check(const FiniteHypergroup& h,
                             const Measure<FiniteHypergroup, Rat>& lambda,
                             const DecomposeOptions& opts, int sequence_cap,
                             const LimitOptions& lopts, double cross_tol) {
  CrossCheckResult out{decompose(h, lambda, opts), {}, false, 0, 0, false, false};

  const auto seq = alternating_sequence(lambda, sequence_cap);
  out.verdict = limit_detect(seq.entries, lopts);
  out.escape_seen = out.verdict.kind == LimitKind::EscapesToZero;

  bool measure_kl = false;
  if (out.verdict.kind == LimitKind::Converged && out.verdict.rho) {
    const auto& rho = *out.verdict.rho;
    if (out.verdict.exact_stationary) {
      const auto idm = is_idempotent(rho);
      out.rho_idempotent = idm.idempotent;
      out.rho_residual = to_double(idm.residual);
    } else {
      // rho is the last sequence entry, within the detection tolerance of the
      // true limit; judge idempotency in floats at the kl tolerance.
      const auto idm = is_idempotent(rho.to_float(), opts.kl_tol);
      out.rho_idempotent = idm.idempotent;
      out.rho_residual = idm.residual;
    }
    measure_kl = out.rho_idempotent;
    out.q_vs_rho = (out.dec.q - operator_of(h, rho).matrix()).norm();
  }

  const bool same_verdict = measure_kl == out.dec.kl_holds;
  const bool q_matches = out.verdict.kind != LimitKind::Converged || out.q_vs_rho <= cross_tol;
  out.agree = same_verdict && !out.escape_seen && q_matches;
  return out;
}

}  // namespace hyperkl
