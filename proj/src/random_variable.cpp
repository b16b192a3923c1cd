#include "growthlab/random_variable.hpp"

#include <algorithm>

namespace growthlab {

RandomVariable::RandomVariable(SpacePtr space, std::vector<ExtReal> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != space_->atom_count())
    throw SchemaError("random variable length does not match atom count");
}

RandomVariable RandomVariable::constant(SpacePtr space, ExtReal c) {
  int n = space->atom_count();
  return RandomVariable(std::move(space), std::vector<ExtReal>(n, c));
}

RandomVariable RandomVariable::from_cells(SpacePtr space, int t,
                                          const std::vector<ExtReal>& cell_values) {
  const auto& part = space->partition_at(t);
  if (cell_values.size() != part.size())
    throw SchemaError("cell value list does not match partition size");
  std::vector<ExtReal> vals(space->atom_count());
  for (size_t c = 0; c < part.size(); ++c)
    for (int atom : part[c]) vals[atom] = cell_values[c];
  return RandomVariable(std::move(space), std::move(vals));
}

ExtReal RandomVariable::cell_value(int t, int cell) const {
  return values_[space_->partition_at(t)[cell][0]];
}

RandomVariable RandomVariable::map(ExtReal (*f)(ExtReal)) const {
  std::vector<ExtReal> out(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) out[i] = f(values_[i]);
  return RandomVariable(space_, std::move(out));
}

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b) {
  std::vector<ExtReal> out(a.values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] + b.values_[i];
  return RandomVariable(a.space_, std::move(out));
}

RandomVariable operator-(const RandomVariable& a, const RandomVariable& b) {
  std::vector<ExtReal> out(a.values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] - b.values_[i];
  return RandomVariable(a.space_, std::move(out));
}

RandomVariable operator*(const RandomVariable& a, const RandomVariable& b) {
  std::vector<ExtReal> out(a.values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] * b.values_[i];
  return RandomVariable(a.space_, std::move(out));
}

RandomVariable RandomVariable::operator+(ExtReal c) const {
  std::vector<ExtReal> out(values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = values_[i] + c;
  return RandomVariable(space_, std::move(out));
}

RandomVariable RandomVariable::operator*(ExtReal c) const {
  std::vector<ExtReal> out(values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * c;
  return RandomVariable(space_, std::move(out));
}

RandomVariable RandomVariable::positive_part() const {
  std::vector<ExtReal> out(values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = values_[i].positive_part();
  return RandomVariable(space_, std::move(out));
}

RandomVariable RandomVariable::max_with(ExtReal floor) const {
  std::vector<ExtReal> out(values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = ext_max(values_[i], floor);
  return RandomVariable(space_, std::move(out));
}

bool is_measurable(const RandomVariable& x, int t) {
  for (const auto& cell : x.space()->partition_at(t)) {
    ExtReal v = x[cell[0]];
    for (int atom : cell)
      if (x[atom] != v) return false;
  }
  return true;
}

RandomVariable cond_expect(const RandomVariable& x, int t) {
  const auto& space = *x.space();
  const auto& part = space.partition_at(t);
  std::vector<ExtReal> cell_vals(part.size());
  for (size_t c = 0; c < part.size(); ++c) {
    double pos = 0.0, neg = 0.0;
    bool pos_inf = false, neg_inf = false;
    double pc = space.cell_prob(t, static_cast<int>(c));
    for (int atom : part[c]) {
      ExtReal v = x[atom];
      if (v.is_pos_inf()) {
        pos_inf = true;
      } else if (v.is_neg_inf()) {
        neg_inf = true;
      } else if (v.raw() >= 0) {
        pos += space.atom_prob(atom) * v.raw();
      } else {
        neg += space.atom_prob(atom) * (-v.raw());
      }
    }
    ExtReal ep = pos_inf ? ExtReal::pos_inf() : ExtReal(pos / pc);
    ExtReal en = neg_inf ? ExtReal::pos_inf() : ExtReal(neg / pc);
    cell_vals[c] = ep - en;  // inf - inf = -inf when both blow up
  }
  return RandomVariable::from_cells(x.space(), t, cell_vals);
}

RandomVariable indicator(SpacePtr space, int t, const std::vector<int>& cells) {
  const auto& part = space->partition_at(t);
  std::vector<ExtReal> vals(space->atom_count(), ExtReal(0.0));
  for (int c : cells) {
    if (c < 0 || c >= static_cast<int>(part.size()))
      throw UnknownCell("cell index " + std::to_string(c) + " out of range");
    for (int atom : part[c]) vals[atom] = ExtReal(1.0);
  }
  return RandomVariable(std::move(space), std::move(vals));
}

}  // namespace growthlab
