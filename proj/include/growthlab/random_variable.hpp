#pragma once

#include <vector>

#include "growthlab/extreal.hpp"
#include "growthlab/space.hpp"

namespace growthlab {

/// Extended-real random variable on a finite filtered space, one value per
/// atom. Immutable in spirit: operations return new variables.
class RandomVariable {
 public:
  RandomVariable(SpacePtr space, std::vector<ExtReal> values);

  static RandomVariable constant(SpacePtr space, ExtReal c);

  /// Builds a variable that is constant on each cell of the partition at t;
  /// cell_values is indexed like the partition.
  static RandomVariable from_cells(SpacePtr space, int t, const std::vector<ExtReal>& cell_values);

  const SpacePtr& space() const { return space_; }
  int size() const { return static_cast<int>(values_.size()); }
  ExtReal operator[](int atom) const { return values_[atom]; }
  const std::vector<ExtReal>& values() const { return values_; }

  /// Value on a cell of the partition at t; requires measurability there.
  ExtReal cell_value(int t, int cell) const;

  RandomVariable map(ExtReal (*f)(ExtReal)) const;

  friend RandomVariable operator+(const RandomVariable& a, const RandomVariable& b);
  friend RandomVariable operator-(const RandomVariable& a, const RandomVariable& b);
  friend RandomVariable operator*(const RandomVariable& a, const RandomVariable& b);
  RandomVariable operator+(ExtReal c) const;
  RandomVariable operator*(ExtReal c) const;

  RandomVariable positive_part() const;
  RandomVariable max_with(ExtReal floor) const;

  bool operator==(const RandomVariable& other) const { return values_ == other.values_; }

 private:
  SpacePtr space_;
  std::vector<ExtReal> values_;
};

/// True iff X is constant (exact stored-value equality) on every cell of the
/// partition at min(t, depth).
bool is_measurable(const RandomVariable& x, int t);

/// Conditional expectation at F_t with the library conventions: per cell,
/// E[X+|cell] - E[X-|cell]; a +inf value on any atom of the cell makes the
/// positive part +inf (and symmetrically), so a cell seeing both signs of
/// infinity yields -inf. The output is F_t-measurable.
RandomVariable cond_expect(const RandomVariable& x, int t);

/// Indicator of the union of the given cells of the partition at t.
RandomVariable indicator(SpacePtr space, int t, const std::vector<int>& cells);

}  // namespace growthlab
