#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mgs/exact.hpp"
#include "mgs/spinrep.hpp"

namespace mgs {

// Rotation in coordinates (plane, plane+1) of R^2n, 1-based, acting as
// [[cos t, sin t], [-sin t, cos t]].  Odd planes are R^z on qubit
// (plane+1)/2, even planes R^xx on bond plane/2.
struct PlanarRotation {
  int plane = 1;
  double theta = 0;
};

double canonical_angle(double theta);
Eigen::MatrixXd plane_rotation(int dim, const PlanarRotation& r);
// Product of rotations in time order (first element acts first).
Eigen::MatrixXd rotations_product(int dim, const std::vector<PlanarRotation>& rots);
DenseUnitary rotations_unitary(int n, const std::vector<PlanarRotation>& rots, int cap = kDefaultQubitCap);

std::vector<PlanarRotation> givens_decompose(const Eigen::MatrixXd& qf);

enum class Letter : std::uint8_t { W, T, Winv, Tinv };

using Su2 = Eigen::Matrix2cd;

Su2 letter_unitary(Letter l);
Su2 word_unitary(const std::vector<Letter>& letters);
// Projective (adjoint) distance between two SU(2) elements.
double su2_adjoint_dist(const Su2& u, const Su2& v);
// exp(i theta Z / 2) and exp(i theta X / 2).
Su2 su2_rz(double theta);
Su2 su2_rx(double theta);

struct Su2Word {
  std::vector<Letter> letters;
  Su2 unitary = Su2::Identity();
  double error = 0;

  std::string str() const;
  static Su2Word parse(const std::string& text);
  std::size_t t_count() const;
};

// Merges T runs modulo 8 and cancels adjacent W pairs (projectively).
std::vector<Letter> reduce_word(const std::vector<Letter>& letters);

struct Su2SearchConfig {
  double eps_floor = 5e-4;
  std::size_t max_letters = 160;
  std::size_t max_table = 1500000;
  // Entries generated before the first query.
  std::size_t initial_table = 1 << 12;
};

// Meet-in-the-middle search over words in {W, T} and their inverses.  The
// table of short words grows on demand and is kept for later queries.
class Su2Searcher {
 public:
  explicit Su2Searcher(Su2SearchConfig cfg = {});
  ~Su2Searcher();
  Su2Searcher(Su2Searcher&&) noexcept;
  Su2Searcher& operator=(Su2Searcher&&) noexcept;

  Su2Word search(const Su2& target, double eps);
  std::size_t table_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Su2Word su2_search(const Su2& target, double eps, const Su2SearchConfig& cfg = {});

Circuit map_word(const Su2Word& word, const PlanarRotation& rot, int n);

struct LedgerRow {
  int n = 0;
  int m = 0;
  double eps_budget = 0;
  double eps_loc = 0;
  double eps_glob = 0;
  double rel_gap = 0;
};

std::string ledger_csv_header();
std::string ledger_csv_row(const LedgerRow& row);

struct ApproxConfig {
  Su2SearchConfig search;
  int qubit_cap = kDefaultQubitCap;
};

struct ApproxResult {
  Circuit circuit;
  std::vector<PlanarRotation> rotations;
  std::vector<double> per_rotation_errors;
  LedgerRow ledger;
  // Operator-norm distance of the compiled SO(2n) matrix to the target.
  double eps_so = 0;
  bool global_checked = false;
};

ApproxResult approx_synthesize(const Eigen::MatrixXd& qf, double eps_total, const ApproxConfig& cfg = {});
ApproxResult approx_synthesize(const Eigen::MatrixXd& qf, double eps_total, Su2Searcher& searcher,
                               const ApproxConfig& cfg = {});

}  // namespace mgs
