#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adam.hpp"
#include "events.hpp"
#include "network.hpp"

namespace spikekit {

inline constexpr const char* kVersion = "0.1.0";

/// One trial's full configuration. Defaults reproduce the reference setting
/// B=40, lr=1e-3, v_th=0.4, w_decay=0.
struct Hyperparams {
  int batch_size = 40;
  double lr = 1e-3;
  double v_th = 0.4;
  double w_decay = 0.0;
  double tau = 0.25;
  int timesteps = 10;
  int epochs = 200;
  uint64_t seed = 1;
  double surrogate_width = 0.5;
  bool decoupled_decay = false;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Throws config_error naming the offending field.
void validate(const Hyperparams& hp);

/// Builds the standard network matching the trial's neuron constants and seed.
Network make_network(const Hyperparams& hp,
                     const std::array<int, 3>& input_shape = {2, 100, 100});

struct TraceRow {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double seconds = 0.0;  // wall clock; reported in the run log, not the CSV
};

struct TrainingTrace {
  std::vector<TraceRow> rows;

  std::vector<double> test_accs() const;
};

struct TrainOptions {
  std::string run_dir;  // empty: no files written
  int threads = 1;      // 0 = hardware concurrency
  // Optional early stop, checked after each epoch row is recorded.
  std::function<bool(const TraceRow&)> should_stop;
};

/// Seeded-shuffle minibatch training: hard-mode forward, STBP backward, Adam.
/// The epoch loss is the sample-weighted mean over batches; accuracy is
/// evaluated on both splits after every epoch. If run_dir is set, trace.csv
/// and run.jsonl are appended incrementally and a final checkpoint is saved.
/// Aborts with data_error naming epoch and batch if the loss goes non-finite.
TrainingTrace train(Network& net, const DatasetSplit& split, const Hyperparams& hp,
                    const TrainOptions& opts = {});

/// Fraction of samples whose rate-argmax class matches the label, in percent.
double evaluate(const Network& net, const std::vector<EventStream>& samples,
                int timesteps, int threads = 1);

/// CSV with header epoch,train_loss,train_acc,test_acc,seconds. The seconds
/// column is written as 0.000 so reruns of one config are byte-identical;
/// measured wall time lives in run.jsonl.
void write_trace_csv(const TrainingTrace& trace, const std::string& path);
TrainingTrace read_trace_csv(const std::string& path);

}  // namespace spikekit
