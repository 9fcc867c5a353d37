#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "pirs/config.hpp"

namespace pirs {

struct ExperimentSpec {
  std::string name;
  ExperimentConfig config;
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;  // 0 = hardware concurrency
};

struct CsvRow {
  std::string experiment;
  std::string grid;  // "key=value;key=value"
  int block = 0;     // 0 for quantities that do not depend on the block
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

const std::vector<std::string>& experiment_names();
std::string experiment_summary(const std::string& name);

// Runs every grid point of the named experiment. Trials run on a worker pool
// but are reduced in trial order, so output does not depend on `threads`.
std::vector<CsvRow> run_experiment(const ExperimentSpec& spec);

std::string csv_header();
std::string format_number(double x);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

// One observation from a trial.
struct Sample {
  int block;
  std::string metric;
  double value;
};
using TrialFn = std::function<std::vector<Sample>(std::uint64_t trial_seed)>;

// Evaluates fn for trials 0..n-1 (seed = trial_seed(base, t)) on `threads`
// workers. Result order is by trial index. Rethrows the lowest-index failure.
std::vector<std::vector<Sample>> run_trials(int n, std::uint64_t base_seed, int threads, const TrialFn& fn);

// Mean and standard error per (block, metric), in the order of trial 0.
std::vector<CsvRow> reduce_trials(const std::vector<std::vector<Sample>>& per_trial);

}  // namespace pirs
