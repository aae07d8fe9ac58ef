#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sphframe {

/// Absolute tolerance for every matrix identity checked in this module.
inline constexpr double kIdentityTol = 1e-12;

/// Haar framelet filter bank for one refinement step with `ell` children and `n` framelets.
///
/// `A` (n x ell) holds the highpass coefficients, `p` (ell) the lowpass weights and `Q`
/// (ell x (n+1)) a left inverse of P = [p^T; A]. Columns of Q are the analysis filters, rows
/// of P the synthesis filters. Instances built through `make` satisfy
///   A = (1/c) A A^T A,   Q P = I,   A p = 0,   p > 0,   |p| = 1
/// to `kIdentityTol`.
class FilterBank {
 public:
  static FilterBank make(Eigen::MatrixXd A, Eigen::VectorXd p, Eigen::MatrixXd Q, double c);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& p() const { return p_; }
  const Eigen::MatrixXd& Q() const { return Q_; }
  double c() const { return c_; }
  int ell() const { return static_cast<int>(p_.size()); }
  int n() const { return static_cast<int>(A_.rows()); }

  /// P = [p^T; A], (n+1) x ell.
  Eigen::MatrixXd P() const;

 private:
  FilterBank(Eigen::MatrixXd A, Eigen::VectorXd p, Eigen::MatrixXd Q, double c)
      : A_(std::move(A)), p_(std::move(p)), Q_(std::move(Q)), c_(c) {}

  Eigen::MatrixXd A_;
  Eigen::VectorXd p_;
  Eigen::MatrixXd Q_;
  double c_;
};

/// Uniform-branching hierarchical partition description.
struct PartitionSchema {
  int branching = 4;
  int depth = 0;
  std::vector<double> child_area_fractions;  // length == branching

  static PartitionSchema area_regular(int branching, int depth);
  void validate() const;
};

double max_abs(const Eigen::MatrixXd& m);

/// True iff |A - (1/c) A A^T A|_max <= 1e-12.
bool validate_tight(const Eigen::MatrixXd& A, double c);

/// True iff |Q [p^T; A] - I|_max <= 1e-12. Throws on nonconforming shapes.
bool validate_left_inverse(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p,
                           const Eigen::MatrixXd& A);

/// Orthonormal-basis test: c == 1 and diag(A A^T) == 1.
bool check_orthonormal_basis(const FilterBank& fb);

/// Moore-Penrose left inverse (P^T P)^{-1} P^T of a full-column-rank P.
Eigen::MatrixXd pseudo_inverse_left(const Eigen::MatrixXd& P);

/// Bank whose highpass rows are all distinct permutations of the zero-sum vector `w`,
/// sorted lexicographically; p = 1/sqrt(ell).
FilterBank build_from_permutations(const Eigen::VectorXd& w);

/// Bank with A = (1/sqrt(c)) V U^T for column-orthonormal U (ell x m) and V (n x m).
/// Such an A satisfies A A^T A = A / c, so the returned bank's frame bound is 1 / c.
FilterBank build_from_uv(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                         const Eigen::VectorXd& p, double c);

namespace banks {

/// Four children, three framelets, orthonormal (c = 1).
FilterBank square_haar();
/// Same matrices used on the interval with a 4-way split.
FilterBank interval_haar4();
/// Classical dyadic Haar on the interval.
FilterBank dyadic_haar();
/// Three children, three framelets, c = 1.
FilterBank triangle3();
/// Six directional framelets on four equal-area children, c = 2.
FilterBank spherical();

/// Factors of the unequal-area U/V example. Its P = [p^T; V U^T] has rank m + 1 = 3 < ell,
/// so no left inverse exists and `build_from_uv` rejects it.
struct UvFactors {
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;
  Eigen::VectorXd p;
  double c = 1.0;
};
UvFactors unequal_area_uv();

}  // namespace banks

}  // namespace sphframe
