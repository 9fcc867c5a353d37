#include "pirs/subgroup_partition.hpp"

#include <numeric>

#include "pirs/errors.hpp"

namespace pirs {

std::string to_string(PartitionScheme s) {
  return s == PartitionScheme::Symmetric ? "symmetric" : "asymmetric";
}

PartitionScheme parse_partition_scheme(const std::string& s) {
  if (s == "symmetric") return PartitionScheme::Symmetric;
  if (s == "asymmetric") return PartitionScheme::Asymmetric;
  throw InvalidArgument("unknown partition scheme '" + s + "' (symmetric|asymmetric)");
}

std::vector<int> PartitionState::membership() const {
  std::vector<int> pos(group_size, -1);
  for (size_t k = 0; k < subgroups.size(); ++k)
    for (int e : subgroups[k]) pos[e] = static_cast<int>(k);
  return pos;
}

std::vector<int> PartitionState::element_reflection() const {
  std::vector<int> out(group_size);
  const auto pos = membership();
  for (int e = 0; e < group_size; ++e) out[e] = psi(block - 1, pos[e]);
  return out;
}

PartitionState initial_partition(int L) {
  if (L < 1) throw InvalidArgument("initial_partition: group size must be >= 1");
  PartitionState s;
  s.group_size = L;
  s.block = 1;
  s.subgroups.emplace_back(L);
  std::iota(s.subgroups[0].begin(), s.subgroups[0].end(), 0);
  s.psi = IMat::Ones(1, 1);
  return s;
}

int split_parent(const PartitionState& state) {
  int best = 0;
  for (size_t k = 1; k < state.subgroups.size(); ++k)
    if (state.subgroups[k].size() > state.subgroups[best].size()) best = static_cast<int>(k);
  return best;
}

IMat extend_matrix(const IMat& psi, int k) {
  const int cols = static_cast<int>(psi.cols());
  if (k < 0 || k >= cols) throw InvalidArgument("extend_matrix: position out of range");
  IMat out(psi.rows(), cols + 1);
  out.leftCols(k + 1) = psi.leftCols(k + 1);
  out.col(k + 1) = psi.col(k);
  out.rightCols(cols - k - 1) = psi.rightCols(cols - k - 1);
  return out;
}

IMat next_reflection_vector(const IMat& psi, int k) {
  IMat row = extend_matrix(psi.bottomRows(1), k);
  row(0, k + 1) = -psi(psi.rows() - 1, k);
  return row;
}

PartitionState refine_partition(const PartitionState& state, PartitionScheme scheme) {
  const int k = split_parent(state);
  const auto& parent = state.subgroups[k];
  const int size = static_cast<int>(parent.size());
  if (size < 2) throw CannotRefine("refine_partition: every subgroup is a singleton");
  const int first = scheme == PartitionScheme::Symmetric ? (size + 1) / 2 : size - 1;

  PartitionState next;
  next.group_size = state.group_size;
  next.block = state.block + 1;
  next.subgroups.reserve(state.subgroups.size() + 1);
  for (int j = 0; j < k; ++j) next.subgroups.push_back(state.subgroups[j]);
  next.subgroups.emplace_back(parent.begin(), parent.begin() + first);
  next.subgroups.emplace_back(parent.begin() + first, parent.end());
  for (size_t j = k + 1; j < state.subgroups.size(); ++j) next.subgroups.push_back(state.subgroups[j]);
  next.lineage = state.lineage;
  next.lineage.push_back({next.block, k});

  const IMat ext = extend_matrix(state.psi, k);
  next.psi.resize(ext.rows() + 1, ext.cols());
  next.psi.topRows(ext.rows()) = ext;
  next.psi.bottomRows(1) = next_reflection_vector(state.psi, k);
  return next;
}

std::vector<PartitionState> partition_sequence(int L, PartitionScheme scheme) {
  std::vector<PartitionState> seq;
  seq.reserve(L);
  seq.push_back(initial_partition(L));
  while (static_cast<int>(seq.size()) < L) seq.push_back(refine_partition(seq.back(), scheme));
  return seq;
}

std::vector<IMat> matrix_sequence(int L, PartitionScheme scheme) {
  std::vector<IMat> out;
  for (auto& s : partition_sequence(L, scheme)) out.push_back(std::move(s.psi));
  return out;
}

}  // namespace pirs
