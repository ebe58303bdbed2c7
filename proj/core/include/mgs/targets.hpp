#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "mgs/somat.hpp"

namespace mgs {

struct XxTarget {
  int n = 0;
  TransferMatrix q_dis;
  // Majorana-basis couplings of the periodic XX chain, H = (i/4) sum h_ab c_a c_b.
  TransferMatrix h_xx;
  TransferMatrix gamma0;
};

// Bogoliubov + fermionic Fourier network that block-diagonalizes the XX chain,
// built from two-qubit fSWAP, F_k and B_k gates.
XxTarget xx_target(int n);
// True when m is zero outside the 2x2 diagonal blocks and each block is antisymmetric.
bool is_block_antisymmetric(const TransferMatrix& m);

// Product of a seeded random word over the generators with exactly t_budget
// T-kind gates, each preceded by up to three random Clifford generators.
TransferMatrix random_ring_target(int n, int t_budget, std::uint64_t seed);
std::vector<GeneratorId> random_word(int n, int t_budget, std::uint64_t seed);

Eigen::MatrixXd random_haar_so(int n, std::uint64_t seed);

}  // namespace mgs
