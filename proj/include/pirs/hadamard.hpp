#pragma once

#include <string>

#include "pirs/reflection.hpp"

namespace pirs {

enum class HadamardMethod { Trivial, Sylvester, PaleyI, PaleyII, Kronecker, None };

std::string to_string(HadamardMethod m);

// How (or whether) an order can be built by the implemented constructions.
HadamardMethod hadamard_method(int order);

bool hadamard_constructible(int order);

// Smallest constructible order >= m, searching up to 4m. Returns 0 if none.
int smallest_hadamard_order(int m);

/// +-1 matrix with H H^T = order * I, normalized so the first row and
/// column are all +1. Throws UnsupportedOrder for orders outside reach.
IMat hadamard_matrix(int order);

// Prime-power test; on success writes p and k with q = p^k.
bool prime_power(int q, int* p = nullptr, int* k = nullptr);

}  // namespace pirs
