#include "growthlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace growthlab {

namespace {

std::unordered_map<std::string, int> index_atoms(const std::vector<Atom>& atoms) {
  std::unordered_map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(atoms.size()); ++i) {
    if (!idx.emplace(atoms[i].id, i).second)
      throw BadProbabilities("duplicate atom id: " + atoms[i].id);
  }
  return idx;
}

}  // namespace

SpacePtr FilteredSpace::build(
    std::vector<Atom> atoms,
    const std::vector<std::vector<std::vector<std::string>>>& partitions) {
  if (atoms.empty()) throw BadProbabilities("empty atom list");
  auto idx = index_atoms(atoms);

  auto sp = std::shared_ptr<FilteredSpace>(new FilteredSpace());
  sp->atoms_ = std::move(atoms);
  if (partitions.empty()) throw NonTrivialRoot("no partitions given; need at least F_0");

  for (const auto& part : partitions) {
    Partition p;
    for (const auto& cell_ids : part) {
      Cell cell;
      for (const auto& id : cell_ids) {
        auto it = idx.find(id);
        if (it == idx.end()) throw UnknownCell("unknown atom id in partition: " + id);
        cell.push_back(it->second);
      }
      std::sort(cell.begin(), cell.end());
      p.push_back(std::move(cell));
    }
    sp->partitions_.push_back(std::move(p));
  }
  sp->finalize();
  return sp;
}

SpacePtr FilteredSpace::dyadic(int depth) {
  if (depth < 1) throw BadProbabilities("dyadic space needs depth >= 1");
  int n = 1 << depth;
  auto sp = std::shared_ptr<FilteredSpace>(new FilteredSpace());
  sp->atoms_.reserve(n);
  double p = std::ldexp(1.0, -depth);
  for (int j = 0; j < n; ++j) sp->atoms_.push_back({"w" + std::to_string(j), p});
  for (int t = 0; t <= depth; ++t) {
    Partition part;
    int cells = 1 << t, width = n >> t;
    part.reserve(cells);
    for (int c = 0; c < cells; ++c) {
      Cell cell(width);
      for (int k = 0; k < width; ++k) cell[k] = c * width + k;
      part.push_back(std::move(cell));
    }
    sp->partitions_.push_back(std::move(part));
  }
  sp->finalize();
  return sp;
}

SpacePtr FilteredSpace::uniform_grid(int n) {
  if (n < 1) throw BadProbabilities("grid needs at least one atom");
  auto sp = std::shared_ptr<FilteredSpace>(new FilteredSpace());
  sp->atoms_.reserve(n);
  for (int j = 0; j < n; ++j) sp->atoms_.push_back({"w" + std::to_string(j), 1.0 / n});
  Partition root(1);
  root[0].resize(n);
  for (int j = 0; j < n; ++j) root[0][j] = j;
  Partition fine(n);
  for (int j = 0; j < n; ++j) fine[j] = {j};
  sp->partitions_.push_back(std::move(root));
  sp->partitions_.push_back(std::move(fine));
  sp->finalize();
  return sp;
}

void FilteredSpace::finalize() {
  const int n = atom_count();
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.p > 0.0) || !std::isfinite(a.p))
      throw BadProbabilities("atom " + a.id + " has nonpositive probability");
    total += a.p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadProbabilities("probabilities sum to " + std::to_string(total));

  if (partitions_[0].size() != 1 || static_cast<int>(partitions_[0][0].size()) != n)
    throw NonTrivialRoot("partition at t=0 must be the single-cell partition");

  cell_of_atom_.assign(partitions_.size(), std::vector<int>(n, -1));
  cell_probs_.resize(partitions_.size());
  for (size_t t = 0; t < partitions_.size(); ++t) {
    auto& lookup = cell_of_atom_[t];
    auto& probs = cell_probs_[t];
    probs.assign(partitions_[t].size(), 0.0);
    for (size_t c = 0; c < partitions_[t].size(); ++c) {
      if (partitions_[t][c].empty()) throw NonRefining("empty cell at level " + std::to_string(t));
      for (int atom : partitions_[t][c]) {
        if (lookup[atom] != -1)
          throw NonRefining("atom " + atoms_[atom].id + " appears in two cells at level " +
                            std::to_string(t));
        lookup[atom] = static_cast<int>(c);
        probs[c] += atoms_[atom].p;
      }
    }
    for (int atom = 0; atom < n; ++atom)
      if (lookup[atom] == -1)
        throw NonRefining("atom " + atoms_[atom].id + " missing from partition at level " +
                          std::to_string(t));
    // every cell at t must sit inside one cell at t-1
    if (t > 0) {
      for (const auto& cell : partitions_[t]) {
        int parent = cell_of_atom_[t - 1][cell[0]];
        for (int atom : cell)
          if (cell_of_atom_[t - 1][atom] != parent)
            throw NonRefining("partition at level " + std::to_string(t) +
                              " does not refine level " + std::to_string(t - 1));
      }
    }
  }
}

int FilteredSpace::atom_index(const std::string& id) const {
  for (int i = 0; i < atom_count(); ++i)
    if (atoms_[i].id == id) return i;
  throw UnknownCell("unknown atom id: " + id);
}

}  // namespace growthlab
