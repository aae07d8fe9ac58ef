#include "sphframe/filter_bank.hpp"

#include "sphframe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sphframe {

namespace {

std::string shape(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_bank_shapes(const Eigen::MatrixXd& A, const Eigen::VectorXd& p,
                         const Eigen::MatrixXd& Q) {
  const auto ell = p.size();
  if (ell < 1) throw Error(ErrorKind::dimension, "lowpass vector p is empty");
  if (A.cols() != ell && A.rows() != 0)
    throw Error(ErrorKind::dimension, "A is " + shape(A) + " but p has " +
                                          std::to_string(ell) + " entries");
  if (Q.rows() != ell || Q.cols() != A.rows() + 1)
    throw Error(ErrorKind::dimension, "Q is " + shape(Q) + ", expected " +
                                          std::to_string(ell) + "x" +
                                          std::to_string(A.rows() + 1));
}

Eigen::MatrixXd stack_p_a(const Eigen::VectorXd& p, const Eigen::MatrixXd& A) {
  Eigen::MatrixXd P(A.rows() + 1, p.size());
  P.row(0) = p.transpose();
  if (A.rows() > 0) P.bottomRows(A.rows()) = A;
  return P;
}

}  // namespace

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd FilterBank::P() const { return stack_p_a(p_, A_); }

FilterBank FilterBank::make(Eigen::MatrixXd A, Eigen::VectorXd p, Eigen::MatrixXd Q, double c) {
  require_bank_shapes(A, p, Q);
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "frame bound must be positive");
  if ((p.array() <= 0.0).any())
    throw Error(ErrorKind::domain, "lowpass weights must be strictly positive");
  if (std::abs(p.norm() - 1.0) > kIdentityTol)
    throw Error(ErrorKind::domain, "lowpass weights must have unit 2-norm");
  if (A.rows() > 0 && max_abs(A * p) > kIdentityTol)
    throw Error(ErrorKind::orthonormality, "A p != 0");
  if (A.rows() > 0 && !validate_tight(A, c))
    throw Error(ErrorKind::numerical, "A violates A = (1/c) A A^T A");
  if (!validate_left_inverse(Q, p, A))
    throw Error(ErrorKind::rank_deficient, "Q is not a left inverse of [p^T; A]");
  return FilterBank(std::move(A), std::move(p), std::move(Q), c);
}

PartitionSchema PartitionSchema::area_regular(int branching, int depth) {
  PartitionSchema s;
  s.branching = branching;
  s.depth = depth;
  s.child_area_fractions.assign(static_cast<std::size_t>(std::max(branching, 0)),
                                1.0 / branching);
  s.validate();
  return s;
}

void PartitionSchema::validate() const {
  if (branching < 2) throw Error(ErrorKind::domain, "branching must be >= 2");
  if (depth < 0) throw Error(ErrorKind::domain, "depth must be >= 0");
  if (child_area_fractions.size() != static_cast<std::size_t>(branching))
    throw Error(ErrorKind::dimension, "one area fraction per child required");
  const double total =
      std::accumulate(child_area_fractions.begin(), child_area_fractions.end(), 0.0);
  if (std::abs(total - 1.0) > kIdentityTol)
    throw Error(ErrorKind::domain, "child area fractions must sum to 1");
}

bool validate_tight(const Eigen::MatrixXd& A, double c) {
  if (A.size() == 0) throw Error(ErrorKind::dimension, "A is empty");
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "frame bound must be positive");
  const Eigen::MatrixXd residual = A - (A * A.transpose() * A) / c;
  return max_abs(residual) <= kIdentityTol;
}

bool validate_left_inverse(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p,
                           const Eigen::MatrixXd& A) {
  require_bank_shapes(A, p, Q);
  const auto ell = p.size();
  const Eigen::MatrixXd residual =
      Q * stack_p_a(p, A) - Eigen::MatrixXd::Identity(ell, ell);
  return max_abs(residual) <= kIdentityTol;
}

bool check_orthonormal_basis(const FilterBank& fb) {
  if (fb.c() != 1.0) return false;
  const Eigen::VectorXd diag = (fb.A() * fb.A().transpose()).diagonal();
  return (diag.array() - 1.0).abs().maxCoeff() <= kIdentityTol;
}

Eigen::MatrixXd pseudo_inverse_left(const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd gram = P.transpose() * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  const double bottom = eig.eigenvalues().minCoeff();
  if (!(top > 0.0) || bottom <= 1e-10 * top)
    throw Error(ErrorKind::rank_deficient,
                "P^T P is singular; P has no left inverse (rank < " +
                    std::to_string(P.cols()) + ")");
  return gram.ldlt().solve(P.transpose());
}

FilterBank build_from_permutations(const Eigen::VectorXd& w) {
  const auto ell = w.size();
  if (ell < 2) throw Error(ErrorKind::dimension, "generator needs at least 2 entries");
  if (std::abs(w.sum()) > kIdentityTol)
    throw Error(ErrorKind::nonzero_sum, "generator entries must sum to zero");

  // next_permutation from the sorted sequence visits each distinct permutation once, in
  // lexicographic order.
  std::vector<double> perm(w.data(), w.data() + ell);
  std::sort(perm.begin(), perm.end());
  std::vector<std::vector<double>> rows;
  do {
    rows.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), ell);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (Eigen::Index i = 0; i < ell; ++i) A(static_cast<Eigen::Index>(k), i) = rows[k][i];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-9);
  if (qr.rank() != ell - 1)
    throw Error(ErrorKind::rank_deficient,
                "permutation matrix has row rank " + std::to_string(qr.rank()) +
                    ", expected " + std::to_string(ell - 1));

  const Eigen::MatrixXd cubic = A * A.transpose() * A;
  double c = 0.0;
  for (Eigen::Index k = 0; k < A.rows() && c == 0.0; ++k)
    for (Eigen::Index i = 0; i < ell; ++i)
      if (std::abs(A(k, i)) > 1e-9) {
        c = cubic(k, i) / A(k, i);
        break;
      }
  if (!(c > 0.0) || !validate_tight(A, c))
    throw Error(ErrorKind::numerical, "could not recover a frame bound");

  const Eigen::VectorXd p = Eigen::VectorXd::Constant(ell, 1.0 / std::sqrt(double(ell)));
  Eigen::MatrixXd Q = pseudo_inverse_left(stack_p_a(p, A));
  return FilterBank::make(std::move(A), p, std::move(Q), c);
}

FilterBank build_from_uv(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                         const Eigen::VectorXd& p, double c) {
  const auto ell = U.rows();
  const auto m = U.cols();
  const auto n = V.rows();
  if (V.cols() != m || p.size() != ell)
    throw Error(ErrorKind::dimension, "U is " + shape(U) + ", V is " + shape(V) +
                                          ", p has " + std::to_string(p.size()) + " entries");
  if (!(n + 1 >= ell && ell >= m))
    throw Error(ErrorKind::dimension, "requires n + 1 >= ell >= m");
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "frame bound must be positive");
  const auto id = Eigen::MatrixXd::Identity(m, m);
  if (max_abs(U.transpose() * U - id) > kIdentityTol)
    throw Error(ErrorKind::orthonormality, "columns of U are not orthonormal");
  if (max_abs(V.transpose() * V - id) > kIdentityTol)
    throw Error(ErrorKind::orthonormality, "columns of V are not orthonormal");
  if ((p.array() <= 0.0).any() || std::abs(p.norm() - 1.0) > kIdentityTol)
    throw Error(ErrorKind::domain, "p must be a positive unit vector");

  Eigen::MatrixXd A = V * U.transpose() / std::sqrt(c);
  if (max_abs(A * p) > kIdentityTol) throw Error(ErrorKind::orthonormality, "A p != 0");
  Eigen::MatrixXd Q = pseudo_inverse_left(stack_p_a(p, A));
  // V U^T is a partial isometry, so A A^T A = A / c and the bound A carries is 1 / c.
  return FilterBank::make(std::move(A), p, std::move(Q), 1.0 / c);
}

namespace banks {

FilterBank square_haar() {
  Eigen::MatrixXd A(3, 4);
  A << 1, 1, -1, -1,
       1, -1, 1, -1,
       1, -1, -1, 1;
  A *= 0.5;
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.5);
  Eigen::MatrixXd Q(4, 4);
  Q << p, A.transpose();
  return FilterBank::make(A, p, Q, 1.0);
}

FilterBank interval_haar4() { return square_haar(); }

FilterBank dyadic_haar() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd A(1, 2);
  A << s, -s;
  Eigen::VectorXd p(2);
  p << s, s;
  Eigen::MatrixXd Q(2, 2);
  Q << p, A.transpose();
  return FilterBank::make(A, p, Q, 1.0);
}

FilterBank triangle3() {
  Eigen::MatrixXd A(3, 3);
  A << 2, -1, -1,
       -1, 2, -1,
       -1, -1, 2;
  A /= 3.0;
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(3, std::sqrt(3.0) / 3.0);
  Eigen::MatrixXd P(4, 3);
  P << p.transpose(), A;
  return FilterBank::make(A, p, pseudo_inverse_left(P), 1.0);
}

FilterBank spherical() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd A(6, 4);
  A << s, -s, 0, 0,
       s, 0, -s, 0,
       s, 0, 0, -s,
       0, s, -s, 0,
       0, s, 0, -s,
       0, 0, s, -s;
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.5);
  const double q = std::sqrt(2.0) / 4.0;
  Eigen::MatrixXd Q(4, 7);
  Q << 0.5, q, q, q, 0, 0, 0,
       0.5, -q, 0, 0, q, q, 0,
       0.5, 0, -q, 0, -q, 0, q,
       0.5, 0, 0, -q, 0, -q, -q;
  return FilterBank::make(A, p, Q, 2.0);
}

UvFactors unequal_area_uv() {
  UvFactors f;
  f.U.resize(4, 2);
  f.U << 1.0 / std::sqrt(5.0), 0,
         -2.0 * std::sqrt(5.0) / 5.0, 0,
         0, 3.0 / 5.0,
         0, -4.0 / 5.0;
  f.V.resize(3, 2);
  const double r3 = std::sqrt(3.0) / 3.0;
  const double r2 = std::sqrt(2.0) / 2.0;
  f.V << r3, r2,
         r3, -r2,
         r3, 0;
  f.p.resize(4);
  f.p << 2, 1, 4, 3;
  f.p /= std::sqrt(30.0);
  f.c = 1.0;
  return f;
}

}  // namespace banks

}  // namespace sphframe
