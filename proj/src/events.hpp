#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace spikekit {

/// One brightness-change event from an event camera. x is the pixel column,
/// y the pixel row, t_us the microsecond timestamp, p the sign of the change.
struct Event {
  int x = 0;
  int y = 0;
  int64_t t_us = 0;
  bool positive = true;

  friend bool operator==(const Event&, const Event&) = default;
};

constexpr int64_t kDefaultDurationUs = 100000;  // 100 ms recording window

/// Ordered events of one recording sample. Timestamps are non-decreasing and
/// never exceed duration_us.
struct EventStream {
  std::vector<Event> events;
  int label = 0;  // class0 = car-like, class1 = background
  int64_t duration_us = kDefaultDurationUs;

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

/// Binary spike frames shaped [T, 2, H, W]; channel 0 carries positive
/// polarity, channel 1 negative.
struct SpikeTensor {
  Tensor data;

  int timesteps() const { return data.shape.empty() ? 0 : data.dim(0); }
};

struct DatasetSplit {
  std::vector<EventStream> train;
  std::vector<EventStream> test;

  size_t count(bool test_split, int label) const;
};

enum class EventFormat { csv, packed_binary };

/// CSV: one `x,y,t_us,p` record per line, p in {0,1} (1 = positive), optional
/// header. Packed binary: little-endian 9-byte records (x:u16, y:u16,
/// t_us:u32, p:u8), no header. Both reject timestamp regressions and
/// timestamps past duration_us.
EventStream parse_event_file(const std::string& path, EventFormat format,
                             int64_t duration_us = kDefaultDurationUs);

void write_event_file(const EventStream& stream, const std::string& path,
                      EventFormat format);

/// Bins events into T frames: bin = floor(t * T / duration), clamped to T-1.
/// Repeated events in one cell OR together; out-of-bounds pixels are dropped.
SpikeTensor encode_frames(const EventStream& stream, int timesteps, int height,
                          int width);

/// Loads a `<root>/{train,test}/{background,cars}/*.csv` tree. cars -> class0,
/// background -> class1; files are taken in sorted name order.
DatasetSplit load_ncars_layout(const std::string& root,
                               int64_t duration_us = kDefaultDurationUs);

/// Materializes a split back to the same tree layout (CSV files).
void write_dataset_tree(const DatasetSplit& split, const std::string& root);

}  // namespace spikekit
