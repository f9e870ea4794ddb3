#include "trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stbp.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace spikekit {

void validate(const Hyperparams& hp) {
  if (hp.batch_size < 1) throw config_error("batch_size must be >= 1, got " + std::to_string(hp.batch_size));
  if (!(hp.lr > 0.0)) throw config_error("lr must be positive, got " + std::to_string(hp.lr));
  if (!(hp.v_th > 0.0)) throw config_error("v_th must be positive, got " + std::to_string(hp.v_th));
  if (hp.w_decay < 0.0) throw config_error("w_decay must be >= 0, got " + std::to_string(hp.w_decay));
  if (!(hp.tau > 0.0 && hp.tau < 1.0)) throw config_error("tau must be in (0,1), got " + std::to_string(hp.tau));
  if (hp.timesteps < 1) throw config_error("timesteps must be >= 1, got " + std::to_string(hp.timesteps));
  if (hp.epochs < 0) throw config_error("epochs must be >= 0, got " + std::to_string(hp.epochs));
  if (!(hp.surrogate_width > 0.0))
    throw config_error("surrogate_width must be positive, got " + std::to_string(hp.surrogate_width));
}

Network make_network(const Hyperparams& hp, const std::array<int, 3>& input_shape) {
  validate(hp);
  LifParams lif;
  lif.v_th = hp.v_th;
  lif.tau = hp.tau;
  return build_network(input_shape, lif, hp.seed);
}

std::vector<double> TrainingTrace::test_accs() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const TraceRow& r : rows) v.push_back(r.test_acc);
  return v;
}

namespace {

json hyperparams_json(const Hyperparams& hp) {
  return json{{"batch_size", hp.batch_size},
              {"lr", hp.lr},
              {"v_th", hp.v_th},
              {"w_decay", hp.w_decay},
              {"tau", hp.tau},
              {"timesteps", hp.timesteps},
              {"epochs", hp.epochs},
              {"seed", hp.seed},
              {"surrogate_width", hp.surrogate_width},
              {"decoupled_decay", hp.decoupled_decay}};
}

std::string format_row(const TraceRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.12g,%.6f,%.6f,0.000\n", row.epoch, row.train_loss,
                row.train_acc, row.test_acc);
  return buf;
}

int classify_sample(const Network& net, const EventStream& sample, int timesteps) {
  const SpikeTensor frames =
      encode_frames(sample, timesteps, net.input_shape[1], net.input_shape[2]);
  const ForwardRecord rec = forward(net, frames, SpikeMode::hard);
  return classify(rec.outputs);
}

}  // namespace

double evaluate(const Network& net, const std::vector<EventStream>& samples,
                int timesteps, int threads) {
  if (samples.empty()) throw data_error("evaluate: sample set is empty");
  std::vector<char> correct(samples.size(), 0);
  parallel_for(samples.size(), threads, [&](size_t i) {
    correct[i] = classify_sample(net, samples[i], timesteps) == samples[i].label ? 1 : 0;
  });
  const size_t hits = static_cast<size_t>(std::count(correct.begin(), correct.end(), 1));
  return 100.0 * static_cast<double>(hits) / static_cast<double>(samples.size());
}

TrainingTrace train(Network& net, const DatasetSplit& split, const Hyperparams& hp,
                    const TrainOptions& opts) {
  validate(hp);
  if (split.train.empty()) throw data_error("train: training split is empty");
  if (split.test.empty()) throw data_error("train: test split is empty");
  if (net.lif.v_th != hp.v_th || net.lif.tau != hp.tau)
    throw config_error("train: network neuron constants do not match the hyperparameters");

  const int t_n = hp.timesteps;
  const int n_classes = net.layer_output_shapes().back()[0];
  const size_t n_train = split.train.size();

  std::ofstream csv, log;
  if (!opts.run_dir.empty()) {
    fs::create_directories(opts.run_dir);
    csv.open(fs::path(opts.run_dir) / "trace.csv", std::ios::trunc);
    log.open(fs::path(opts.run_dir) / "run.jsonl", std::ios::trunc);
    if (!csv || !log) throw io_error("cannot write into run directory " + opts.run_dir);
    csv << "epoch,train_loss,train_acc,test_acc,seconds\n" << std::flush;
    json header{{"type", "config"},
                {"version", kVersion},
                {"hyperparams", hyperparams_json(hp)},
                {"dataset", json{{"train", split.train.size()}, {"test", split.test.size()}}},
                {"threads", opts.threads}};
    log << header.dump() << "\n" << std::flush;
  }

  AdamState opt = make_adam_state(net);
  AdamConfig adam_cfg;
  adam_cfg.decoupled_decay = hp.decoupled_decay;

  TrainingTrace trace;
  std::vector<size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    // dedicated per-epoch shuffle stream: the visit order does not depend on B
    Rng shuffle_rng(mix_seed(hp.seed, 0xEF0C + static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double loss_weighted = 0.0;
    size_t batch_index = 0;
    for (size_t begin = 0; begin < n_train; begin += static_cast<size_t>(hp.batch_size)) {
      const size_t end = std::min(n_train, begin + static_cast<size_t>(hp.batch_size));
      const int s_n = static_cast<int>(end - begin);

      Tensor outputs_batch({s_n, t_n, n_classes});
      Tensor labels({s_n, n_classes});
      std::vector<ParamGrads> sample_grads(static_cast<size_t>(s_n));

      parallel_for(static_cast<size_t>(s_n), opts.threads, [&](size_t i) {
        const EventStream& sample = split.train[order[begin + i]];
        const SpikeTensor frames =
            encode_frames(sample, t_n, net.input_shape[1], net.input_shape[2]);
        const ForwardRecord rec = forward(net, frames, SpikeMode::hard, hp.surrogate_width);

        Tensor y({n_classes});
        y[static_cast<size_t>(sample.label)] = 1.0;
        sample_grads[i] = stbp_backward(net, rec, y, s_n);

        for (int t = 0; t < t_n; ++t)
          for (int c = 0; c < n_classes; ++c)
            outputs_batch[(i * t_n + t) * n_classes + c] =
                rec.outputs[static_cast<size_t>(t) * n_classes + c];
        labels[i * n_classes + static_cast<size_t>(sample.label)] = 1.0;
      });

      const double loss = stbp_loss(outputs_batch, labels);
      if (!std::isfinite(loss))
        throw data_error("training aborted: non-finite loss at epoch " + std::to_string(epoch) +
                         ", batch " + std::to_string(batch_index));
      loss_weighted += loss * s_n;

      // reduce in sample order so the result is independent of thread count
      ParamGrads total = std::move(sample_grads[0]);
      for (size_t i = 1; i < sample_grads.size(); ++i) accumulate(total, sample_grads[i]);
      adam_step(net, total, opt, hp.lr, hp.w_decay, adam_cfg);
      ++batch_index;
    }

    TraceRow row;
    row.epoch = epoch;
    row.train_loss = loss_weighted / static_cast<double>(n_train);
    row.train_acc = evaluate(net, split.train, t_n, opts.threads);
    row.test_acc = evaluate(net, split.test, t_n, opts.threads);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
    trace.rows.push_back(row);

    if (csv.is_open()) csv << format_row(row) << std::flush;
    if (log.is_open()) {
      json line{{"type", "epoch"},         {"epoch", row.epoch},
                {"train_loss", row.train_loss}, {"train_acc", row.train_acc},
                {"test_acc", row.test_acc},     {"wall_seconds", row.seconds}};
      log << line.dump() << "\n" << std::flush;
    }
    if (opts.should_stop && opts.should_stop(row)) break;
  }

  if (!opts.run_dir.empty())
    save_checkpoint(net, (fs::path(opts.run_dir) / "final.ckpt").string());
  return trace;
}

void write_trace_csv(const TrainingTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out << "epoch,train_loss,train_acc,test_acc,seconds\n";
  for (const TraceRow& row : trace.rows) out << format_row(row);
  if (!out) throw io_error("write failed for " + path);
}

TrainingTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open trace " + path);
  TrainingTrace trace;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;  // header
    TraceRow row;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &row.epoch, &row.train_loss,
                    &row.train_acc, &row.test_acc, &row.seconds) != 5)
      throw parse_error(path + ":" + std::to_string(line_no) + ": malformed trace row");
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace spikekit
