#pragma once

#include <string>
#include <vector>

#include "mgs/somat.hpp"

namespace mgs {

// Layered circuit.  Gates inside a layer have disjoint qubit support.
struct Circuit {
  int n = 1;
  std::vector<std::vector<GeneratorId>> layers;
  std::string provenance;

  int depth() const { return static_cast<int>(layers.size()); }
  int t_count() const;
  int clifford_count() const;
  int gate_count() const;
  int t_depth() const;
  // Gates in time order.
  std::vector<GeneratorId> flatten() const;
  bool layers_disjoint() const;

  // ASAP layering of a time-ordered gate list.
  static Circuit from_gates(int n, const std::vector<GeneratorId>& gates, std::string provenance = {});
};

TransferMatrix eval_circuit(const Circuit& c);

struct GateCountBounds {
  mpz_class nt_bound;
  mpz_class nc_bound;
};

GateCountBounds gate_count_bounds(int n, unsigned long k_max);
unsigned t_depth_lower_bound(const TransferMatrix& q);

struct SynthesisReport {
  Circuit circuit;
  unsigned k_max_in = 0;
  mpz_class nt_bound;
  mpz_class nc_bound;
  unsigned t_depth_lb = 0;
};

SynthesisReport synthesize(const TransferMatrix& q);

}  // namespace mgs
