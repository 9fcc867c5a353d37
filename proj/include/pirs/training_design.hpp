#pragma once

#include <string>

#include "pirs/hadamard.hpp"
#include "pirs/reflection.hpp"

namespace pirs {

struct TrainingDesignReport {
  ReflectionMatrix matrix;
  bool full_rank = false;
  // tr((T^H T)^{-1}); NaN when the matrix is rank deficient.
  double normalized_mse = 0.0;
  std::string method;
};

// Exact M x M DFT with entries exp(-j 2 pi r c / M).
CMat dft_matrix(int M);

// Entrywise nearest-alphabet DFT. Rank is a property, not a precondition.
ReflectionMatrix quantized_dft(int M, const PhaseAlphabet& alphabet);

// Leading M x M block of the smallest constructible Hadamard order >= M.
ReflectionMatrix truncated_hadamard(int M, const PhaseAlphabet& alphabet = PhaseAlphabet(1));

// -1 on the diagonal, +1 elsewhere. Singular at M = 2.
ReflectionMatrix naive_matrix(int M, const PhaseAlphabet& alphabet = PhaseAlphabet(1));

// Quantized DFT for b >= 2, truncated Hadamard for b = 1.
TrainingDesignReport design_basis_matrix(int M, const PhaseAlphabet& alphabet);

// Fill in rank and normalized MSE for an arbitrary matrix.
TrainingDesignReport make_report(ReflectionMatrix matrix, std::string method);

// tr((T^H T)^{-1}); throws SingularMatrix when T is rank deficient.
double normalized_training_mse(const ReflectionMatrix& theta);
double normalized_training_mse(const CMat& theta);

// Brute force over all K^(M^2) matrices; requires b * M^2 <= 16.
TrainingDesignReport exhaustive_optimal_basis(int M, const PhaseAlphabet& alphabet);

}  // namespace pirs
