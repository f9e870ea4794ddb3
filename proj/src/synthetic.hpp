#pragma once

#include <cstdint>

#include "events.hpp"

namespace spikekit {

/// Two-class stand-in for an event-camera dataset, sized for desk runs.
/// class0: a vertical bar sweeping across the frame at constant velocity,
/// ON events on its leading edge and OFF events on its trailing edge.
/// class1: spatially uniform noise at a matched event rate, so event counting
/// alone cannot separate the classes.
///
/// Every stream is 100 ms at 100x100. The split holds n_per_class training
/// samples and n_per_class/2 test samples per class, all derived
/// deterministically from the seed.
DatasetSplit generate_synthetic(int n_per_class, uint64_t seed);

}  // namespace spikekit
