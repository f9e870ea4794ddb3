#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trainer.hpp"

namespace spikekit {

/// One-at-a-time exploration: every trial overrides exactly one field of the
/// base setting with one value from its axis.
struct SweepAxis {
  std::string param;  // batch_size | lr | v_th | w_decay | tau | timesteps | surrogate_width
  std::vector<double> values;
};

struct SweepPlan {
  Hyperparams base;
  std::vector<SweepAxis> axes;
};

struct TrialSpec {
  int index = 0;
  std::string param;
  double value = 0.0;
  Hyperparams hp;
};

/// Expands axes in declaration order; throws config_error if any value
/// violates the Hyperparams invariants. Per-trial seeds derive from
/// (base seed, trial index).
std::vector<TrialSpec> expand_plan(const SweepPlan& plan);

/// Applies one named override to a Hyperparams value (shared with the CLI).
void set_param(Hyperparams& hp, const std::string& param, double value);

/// The reference exploration grid: B, lr, v_th and w_decay axes around the
/// default setting; 28 trials.
SweepPlan reference_grid();

struct NamedSetting {
  std::string name;
  Hyperparams hp;
};

/// The default setting plus the two enhanced settings
/// (B=20, v_th=0.5, w_decay=0 with lr=7.5e-3 and lr=1e-2).
std::vector<NamedSetting> enhanced_settings();

struct StableRegion {
  bool found = false;
  int entry_epoch = 0;      // 1-based; first epoch whose trailing window is stable
  double trailing_std = 0.0;
  std::string note;
};

/// First epoch e >= window whose trailing `window` test accuracies have
/// population standard deviation below std_threshold.
StableRegion detect_stable_region(const TrainingTrace& trace, int window = 10,
                                  double std_threshold = 0.5);

struct Comparison {
  StableRegion reference;
  StableRegion candidate;
  std::optional<double> speedup;  // entry(reference) / entry(candidate)
  std::optional<double> acc_at_entry_ref;
  std::optional<double> acc_at_entry_cand;
  double ref_min = 0.0, ref_max = 0.0;
  double cand_min = 0.0, cand_max = 0.0;
};

Comparison compare(const TrainingTrace& reference, const TrainingTrace& candidate,
                   int window = 10, double std_threshold = 0.5);

enum class TrialStatus { completed, cached, failed };

struct TrialResult {
  TrialSpec spec;
  TrialStatus status = TrialStatus::completed;
  TrainingTrace trace;
  StableRegion stable;
  double final_test_acc = 0.0;
  double min_acc = 0.0, max_acc = 0.0;
  std::string error;  // set when status == failed
};

struct SweepReport {
  std::vector<TrialResult> trials;

  size_t cached() const;
  size_t failed() const;
};

struct SweepOptions {
  std::string out_dir;  // required: trials persist under out_dir/trial_*/
  int parallelism = 1;  // concurrent trials
  int threads_per_trial = 1;
  int window = 10;
  double std_threshold = 0.5;
};

/// Runs every planned trial, skipping trials whose directory already holds a
/// completed marker with a matching trace checksum. Failed trials (non-finite
/// loss) are recorded and do not stop the sweep. Writes per-trial trace files
/// plus out_dir/summary.csv.
SweepReport run_sweep(const SweepPlan& plan, const DatasetSplit& split,
                      const SweepOptions& opts);

/// Summary row format:
/// trial_id,param,value,final_test_acc,entry_epoch,trailing_std,min_acc,max_acc
void write_summary_csv(const SweepReport& report, const std::string& path);

uint64_t file_checksum(const std::string& path);

}  // namespace spikekit
