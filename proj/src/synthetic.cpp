#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace spikekit {

namespace {

constexpr int kWidth = 100;
constexpr int kHeight = 100;
constexpr int kBarWidth = 4;        // columns between leading and trailing edge
constexpr int kBarHeightMin = 30;
constexpr int kBarHeightMax = 50;
constexpr double kEdgeDensity = 0.8;   // event probability per edge pixel crossing
constexpr double kNoiseFraction = 0.03;  // stray background events on bar samples
constexpr int64_t kJitterUs = 300;

int64_t clamp_time(int64_t t) {
  return std::clamp<int64_t>(t, 0, kDefaultDurationUs);
}

void sort_by_time(EventStream& s) {
  std::stable_sort(s.events.begin(), s.events.end(),
                   [](const Event& a, const Event& b) { return a.t_us < b.t_us; });
}

void add_uniform_noise(EventStream& s, int count, Rng& rng) {
  for (int i = 0; i < count; ++i) {
    Event e;
    e.x = static_cast<int>(rng.uniform_int(0, kWidth - 1));
    e.y = static_cast<int>(rng.uniform_int(0, kHeight - 1));
    e.t_us = rng.uniform_int(0, kDefaultDurationUs);
    e.positive = rng.coin();
    s.events.push_back(e);
  }
}

EventStream make_bar_sample(Rng& rng) {
  EventStream s;
  s.label = 0;

  const bool rightward = rng.coin();
  const int bar_h = static_cast<int>(rng.uniform_int(kBarHeightMin, kBarHeightMax));
  const int y0 = static_cast<int>(rng.uniform_int(0, kHeight - bar_h));
  const double span = kWidth + kBarWidth;  // trailing edge clears the frame in time

  for (int col = 0; col < kWidth; ++col) {
    const int x = rightward ? col : kWidth - 1 - col;
    const auto cross_time = [&](double edge_offset) {
      return static_cast<int64_t>((col + 0.5 + edge_offset) / span * kDefaultDurationUs);
    };
    const int64_t t_lead = cross_time(0.0);
    const int64_t t_trail = cross_time(kBarWidth);
    for (int y = y0; y < y0 + bar_h; ++y) {
      if (rng.uniform() < kEdgeDensity) {
        const int64_t jitter = rng.uniform_int(-kJitterUs, kJitterUs);
        s.events.push_back({x, y, clamp_time(t_lead + jitter), true});
      }
      if (rng.uniform() < kEdgeDensity) {
        const int64_t jitter = rng.uniform_int(-kJitterUs, kJitterUs);
        s.events.push_back({x, y, clamp_time(t_trail + jitter), false});
      }
    }
  }

  const int stray = static_cast<int>(std::lround(
      kNoiseFraction * 2.0 * kEdgeDensity * kWidth * bar_h));
  add_uniform_noise(s, stray, rng);
  sort_by_time(s);
  return s;
}

EventStream make_noise_sample(Rng& rng) {
  EventStream s;
  s.label = 1;
  // draw the rate from the same distribution the bar class uses
  const int bar_h = static_cast<int>(rng.uniform_int(kBarHeightMin, kBarHeightMax));
  const double matched = (1.0 + kNoiseFraction) * 2.0 * kEdgeDensity * kWidth * bar_h;
  const int count = static_cast<int>(std::lround(matched * rng.uniform(0.97, 1.03)));
  add_uniform_noise(s, count, rng);
  sort_by_time(s);
  return s;
}

std::vector<EventStream> make_part(int n_per_class, uint64_t part_seed) {
  std::vector<EventStream> out;
  out.reserve(static_cast<size_t>(n_per_class) * 2);
  for (int i = 0; i < n_per_class; ++i) {
    Rng rng(mix_seed(part_seed, static_cast<uint64_t>(i) * 2));
    out.push_back(make_bar_sample(rng));
  }
  for (int i = 0; i < n_per_class; ++i) {
    Rng rng(mix_seed(part_seed, static_cast<uint64_t>(i) * 2 + 1));
    out.push_back(make_noise_sample(rng));
  }
  return out;
}

}  // namespace

DatasetSplit generate_synthetic(int n_per_class, uint64_t seed) {
  if (n_per_class < 1) throw config_error("generate_synthetic: n_per_class must be >= 1");
  DatasetSplit split;
  split.train = make_part(n_per_class, mix_seed(seed, 0xA11CE));
  split.test = make_part(std::max(1, n_per_class / 2), mix_seed(seed, 0xB0B));
  return split;
}

}  // namespace spikekit
