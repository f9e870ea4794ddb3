#include "events.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace fs = std::filesystem;

namespace spikekit {

size_t DatasetSplit::count(bool test_split, int label) const {
  const auto& v = test_split ? test : train;
  size_t n = 0;
  for (const auto& s : v)
    if (s.label == label) ++n;
  return n;
}

namespace {

void check_event(const EventStream& stream, const Event& e, int64_t prev_t,
                 const std::string& where) {
  if (e.t_us < prev_t)
    throw parse_error(where + ": timestamp regression (" + std::to_string(e.t_us) +
                      " after " + std::to_string(prev_t) + ")");
  if (e.t_us > stream.duration_us)
    throw parse_error(where + ": timestamp " + std::to_string(e.t_us) +
                      " exceeds sample duration " + std::to_string(stream.duration_us));
  if (e.x < 0 || e.y < 0)
    throw parse_error(where + ": negative pixel coordinate");
}

bool parse_int_field(std::string_view field, int64_t& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

EventStream parse_csv(const std::string& path, int64_t duration_us) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);

  EventStream stream;
  stream.duration_us = duration_us;
  std::string line;
  int64_t prev_t = 0;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    // optional header: a first line that does not begin with a number
    if (line_no == 1 && (line[0] < '0' || line[0] > '9') && line[0] != '-') continue;

    int64_t fields[4];
    bool ok = true;
    size_t start = 0;
    for (int idx = 0; idx < 4; ++idx) {
      const size_t comma = line.find(',', start);
      const bool last_field = idx == 3;
      if (last_field != (comma == std::string::npos)) {
        ok = false;
        break;
      }
      const size_t end = last_field ? line.size() : comma;
      if (!parse_int_field(std::string_view(line.data() + start, end - start), fields[idx])) {
        ok = false;
        break;
      }
      start = end + 1;
    }

    if (!ok)
      throw parse_error(path + ":" + std::to_string(line_no) + ": malformed event record '" + line + "'");
    if (fields[3] != 0 && fields[3] != 1)
      throw parse_error(path + ":" + std::to_string(line_no) + ": polarity must be 0 or 1, got " +
                        std::to_string(fields[3]));

    Event e{static_cast<int>(fields[0]), static_cast<int>(fields[1]), fields[2], fields[3] == 1};
    check_event(stream, e, prev_t, path + ":" + std::to_string(line_no));
    prev_t = e.t_us;
    stream.events.push_back(e);
  }
  return stream;
}

constexpr size_t kBinaryRecordSize = 9;

EventStream parse_binary(const std::string& path, int64_t duration_us) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() % kBinaryRecordSize != 0)
    throw parse_error(path + ": file length " + std::to_string(bytes.size()) +
                      " is not a multiple of the 9-byte record size");

  EventStream stream;
  stream.duration_us = duration_us;
  stream.events.reserve(bytes.size() / kBinaryRecordSize);
  int64_t prev_t = 0;
  for (size_t off = 0; off < bytes.size(); off += kBinaryRecordSize) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + off);
    const uint16_t x = static_cast<uint16_t>(p[0] | (p[1] << 8));
    const uint16_t y = static_cast<uint16_t>(p[2] | (p[3] << 8));
    const uint32_t t = static_cast<uint32_t>(p[4]) | (static_cast<uint32_t>(p[5]) << 8) |
                       (static_cast<uint32_t>(p[6]) << 16) | (static_cast<uint32_t>(p[7]) << 24);
    const uint8_t pol = p[8];
    if (pol > 1)
      throw parse_error(path + ": byte offset " + std::to_string(off + 8) +
                        ": polarity must be 0 or 1, got " + std::to_string(pol));
    Event e{x, y, static_cast<int64_t>(t), pol == 1};
    check_event(stream, e, prev_t, path + ": byte offset " + std::to_string(off));
    prev_t = e.t_us;
    stream.events.push_back(e);
  }
  return stream;
}

void write_csv(const EventStream& stream, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out << "x,y,t_us,p\n";
  for (const Event& e : stream.events)
    out << e.x << ',' << e.y << ',' << e.t_us << ',' << (e.positive ? 1 : 0) << '\n';
  if (!out) throw io_error("write failed for " + path);
}

void write_binary(const EventStream& stream, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  for (const Event& e : stream.events) {
    const uint16_t x = static_cast<uint16_t>(e.x);
    const uint16_t y = static_cast<uint16_t>(e.y);
    const uint32_t t = static_cast<uint32_t>(e.t_us);
    unsigned char rec[kBinaryRecordSize] = {
        static_cast<unsigned char>(x & 0xff),         static_cast<unsigned char>(x >> 8),
        static_cast<unsigned char>(y & 0xff),         static_cast<unsigned char>(y >> 8),
        static_cast<unsigned char>(t & 0xff),         static_cast<unsigned char>((t >> 8) & 0xff),
        static_cast<unsigned char>((t >> 16) & 0xff), static_cast<unsigned char>((t >> 24) & 0xff),
        static_cast<unsigned char>(e.positive ? 1 : 0)};
    out.write(reinterpret_cast<const char*>(rec), kBinaryRecordSize);
  }
  if (!out) throw io_error("write failed for " + path);
}

}  // namespace

EventStream parse_event_file(const std::string& path, EventFormat format,
                             int64_t duration_us) {
  return format == EventFormat::csv ? parse_csv(path, duration_us)
                                    : parse_binary(path, duration_us);
}

void write_event_file(const EventStream& stream, const std::string& path,
                      EventFormat format) {
  if (format == EventFormat::csv)
    write_csv(stream, path);
  else
    write_binary(stream, path);
}

SpikeTensor encode_frames(const EventStream& stream, int timesteps, int height,
                          int width) {
  if (timesteps < 1) throw config_error("encode_frames: timesteps must be >= 1");
  SpikeTensor out;
  out.data = Tensor({timesteps, 2, height, width});
  double* d = out.data.data.data();
  const size_t plane = static_cast<size_t>(height) * width;
  for (const Event& e : stream.events) {
    if (e.x >= width || e.y >= height || e.x < 0 || e.y < 0) continue;
    int64_t bin = e.t_us * timesteps / stream.duration_us;
    if (bin >= timesteps) bin = timesteps - 1;
    const size_t ch = e.positive ? 0 : 1;
    d[(static_cast<size_t>(bin) * 2 + ch) * plane + static_cast<size_t>(e.y) * width + e.x] = 1.0;
  }
  return out;
}

namespace {

std::vector<EventStream> load_class_dir(const fs::path& dir, int label,
                                        int64_t duration_us) {
  if (!fs::is_directory(dir))
    throw config_error("dataset directory missing: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  if (files.empty())
    throw config_error("dataset class directory is empty: " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<EventStream> streams;
  streams.reserve(files.size());
  for (const auto& f : files) {
    EventStream s = parse_csv(f.string(), duration_us);
    s.label = label;
    streams.push_back(std::move(s));
  }
  return streams;
}

}  // namespace

DatasetSplit load_ncars_layout(const std::string& root, int64_t duration_us) {
  const fs::path base(root);
  if (!fs::is_directory(base)) throw config_error("dataset root missing: " + root);

  DatasetSplit split;
  for (const char* part : {"train", "test"}) {
    auto cars = load_class_dir(base / part / "cars", 0, duration_us);
    auto background = load_class_dir(base / part / "background", 1, duration_us);
    auto& dst = std::string(part) == "train" ? split.train : split.test;
    dst.reserve(cars.size() + background.size());
    dst.insert(dst.end(), cars.begin(), cars.end());
    dst.insert(dst.end(), background.begin(), background.end());
  }
  return split;
}

void write_dataset_tree(const DatasetSplit& split, const std::string& root) {
  const fs::path base(root);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw io_error("cannot create " + root + ": " + ec.message());

  auto write_part = [&](const std::vector<EventStream>& streams, const char* part) {
    const fs::path cars = base / part / "cars";
    const fs::path background = base / part / "background";
    fs::create_directories(cars);
    fs::create_directories(background);
    size_t idx0 = 0, idx1 = 0;
    char name[32];
    for (const EventStream& s : streams) {
      const bool car = s.label == 0;
      std::snprintf(name, sizeof(name), "sample_%05zu.csv", car ? idx0++ : idx1++);
      write_csv(s, ((car ? cars : background) / name).string());
    }
  };
  write_part(split.train, "train");
  write_part(split.test, "test");
}

}  // namespace spikekit
