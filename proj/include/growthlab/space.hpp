#pragma once

#include <memory>
#include <string>
#include <vector>

#include "growthlab/errors.hpp"

namespace growthlab {

struct Atom {
  std::string id;
  double p;  // strictly positive
};

class FilteredSpace;
using SpacePtr = std::shared_ptr<const FilteredSpace>;

/// Finite filtered probability space: atoms with strictly positive
/// probabilities and a refining sequence of partitions F_0, ..., F_D with
/// F_0 trivial. Queries past the depth use the partition at D (the
/// filtration is held stationary from there on).
class FilteredSpace {
 public:
  using Cell = std::vector<int>;            // atom indices, ascending
  using Partition = std::vector<Cell>;

  /// Validates and builds. partitions[t] lists cells as vectors of atom ids.
  static SpacePtr build(std::vector<Atom> atoms,
                        const std::vector<std::vector<std::vector<std::string>>>& partitions);

  /// Uniform dyadic space: 2^depth atoms, atom j standing for the interval
  /// [j/2^D, (j+1)/2^D); partition at level t has 2^t equal cells.
  static SpacePtr dyadic(int depth);

  /// Uniform grid on [0,1] with n atoms, F_1 = single atoms (and stationary
  /// after); the base space of the counterexample scenarios.
  static SpacePtr uniform_grid(int n);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int depth() const { return static_cast<int>(partitions_.size()) - 1; }
  int level(int t) const { return t < depth() ? t : depth(); }

  const Atom& atom(int i) const { return atoms_[i]; }
  double atom_prob(int i) const { return atoms_[i].p; }

  const Partition& partition_at(int t) const { return partitions_[level(t)]; }
  int cell_count(int t) const { return static_cast<int>(partition_at(t).size()); }
  int cell_of_atom(int t, int atom) const { return cell_of_atom_[level(t)][atom]; }
  double cell_prob(int t, int cell) const { return cell_probs_[level(t)][cell]; }

  int atom_index(const std::string& id) const;  // throws UnknownCell on miss

 private:
  FilteredSpace() = default;
  void finalize();  // checks invariants, fills lookups

  std::vector<Atom> atoms_;
  std::vector<Partition> partitions_;       // index = level
  std::vector<std::vector<int>> cell_of_atom_;
  std::vector<std::vector<double>> cell_probs_;
};

}  // namespace growthlab
