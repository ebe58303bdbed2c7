#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "mgs/ring.hpp"

namespace mgs {

enum class GateKind { Ttil, TtilInv, Stil, StilInv, Rtil, RtilInv };

inline constexpr GateKind kAllGateKinds[] = {GateKind::Ttil, GateKind::TtilInv, GateKind::Stil,
                                             GateKind::StilInv, GateKind::Rtil, GateKind::RtilInv};

std::string kind_name(GateKind k);
GateKind parse_kind(const std::string& name);
GateKind inverse(GateKind k);
inline bool is_t_kind(GateKind k) { return k == GateKind::Ttil || k == GateKind::TtilInv; }
inline bool is_bond_kind(GateKind k) { return k == GateKind::Rtil || k == GateKind::RtilInv; }

// A generator of the discrete gate set.  `q` is the 1-based qubit for
// Ttil/Stil kinds and the 1-based bond (q, q+1) for Rtil kinds.
struct GeneratorId {
  GateKind kind = GateKind::Ttil;
  int q = 1;

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
  GeneratorId inverse() const { return {mgs::inverse(kind), q}; }
  // 0-based rows (a, a+1) of the transfer matrix the generator acts on.
  int plane_row() const { return is_bond_kind(kind) ? 2 * q - 1 : 2 * q - 2; }
  int first_qubit() const { return q; }
  int last_qubit() const { return is_bond_kind(kind) ? q + 1 : q; }
  std::string str() const;
};

void check_site(int n, const GeneratorId& g);

// Square matrix of ring scalars, 2n x 2n, row-major.
class TransferMatrix {
 public:
  TransferMatrix() = default;
  explicit TransferMatrix(int n);

  static TransferMatrix identity(int n);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }

  const RingScalar& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * dim() + j)]; }
  void set(int i, int j, RingScalar v);

  // Set when the matrix is known to be special orthogonal (generators and
  // their products, or after an explicit check).
  bool verified() const { return verified_; }
  void mark_verified(bool v) { verified_ = v; }

  unsigned k_max() const;

  TransferMatrix transpose() const;
  TransferMatrix conj() const;
  Eigen::MatrixXd to_float() const;

  // In-place left multiplication by a generator (a row operation).
  void apply_left(const GeneratorId& g);

  friend bool operator==(const TransferMatrix& x, const TransferMatrix& y) {
    return x.n_ == y.n_ && x.e_ == y.e_;
  }
  friend bool operator!=(const TransferMatrix& x, const TransferMatrix& y) { return !(x == y); }

 private:
  int n_ = 0;
  std::vector<RingScalar> e_;
  bool verified_ = false;
  mutable std::optional<unsigned> k_max_;
};

TransferMatrix generator(int n, const GeneratorId& g);
TransferMatrix matmul(const TransferMatrix& x, const TransferMatrix& y);
TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y);

bool is_orthogonal(const TransferMatrix& q);
RingScalar determinant(const TransferMatrix& q);
bool is_special_orthogonal(const TransferMatrix& q);
unsigned k_max(const TransferMatrix& q);

// Product of a gate sequence in time order: gates[0] acts first, so the
// result is G_d ... G_2 G_1.
TransferMatrix eval_product(int n, const std::vector<GeneratorId>& gates);

// Covariance of the reference Gaussian state: blocks [[0, 1], [-1, 0]].
TransferMatrix vacuum_covariance(int n);

}  // namespace mgs
