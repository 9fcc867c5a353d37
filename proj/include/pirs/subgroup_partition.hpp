#pragma once

#include <string>
#include <vector>

#include "pirs/reflection.hpp"

namespace pirs {

enum class PartitionScheme { Symmetric, Asymmetric };

std::string to_string(PartitionScheme s);
PartitionScheme parse_partition_scheme(const std::string& s);

// One refinement: subgroup at `parent` (0-based) split into positions
// parent and parent + 1 of the new block.
struct SplitEvent {
  int block;  // block number (1-based) produced by the split
  int parent;
};

/// Subgroup index sets of one group at block i (indices are 0-based local
/// element positions), with split history and the i x i +-1 training matrix.
struct PartitionState {
  int group_size = 0;
  int block = 0;
  std::vector<std::vector<int>> subgroups;
  std::vector<SplitEvent> lineage;
  IMat psi;

  // Subgroup position of each local element.
  std::vector<int> membership() const;
  // Block-i element reflection (+-1 per element): last row of psi broadcast
  // onto the subgroups.
  std::vector<int> element_reflection() const;
};

PartitionState initial_partition(int L);

// Position of the largest subgroup, ties to the smallest position.
int split_parent(const PartitionState& state);

// Throws CannotRefine once every subgroup is a singleton.
PartitionState refine_partition(const PartitionState& state, PartitionScheme scheme);

// Duplicate column k (0-based) in place: i x i -> i x (i+1).
IMat extend_matrix(const IMat& psi, int k);

// Last row of psi with column k duplicated, entry k+1 set to -psi(last, k).
IMat next_reflection_vector(const IMat& psi, int k);

// Psi^(1) .. Psi^(L).
std::vector<IMat> matrix_sequence(int L, PartitionScheme scheme);

// All partition states for blocks 1..L.
std::vector<PartitionState> partition_sequence(int L, PartitionScheme scheme);

}  // namespace pirs
