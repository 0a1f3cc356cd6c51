#include "visemelab/trace.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "visemelab/error.hpp"
#include "visemelab/inventory.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

std::optional<std::size_t> TrainingTrace::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

std::vector<double> TrainingTrace::overall_series() const {
  std::vector<double> out;
  out.reserve(epochs.size());
  for (const auto& e : epochs) out.push_back(e.overall);
  return out;
}

TrainingTrace TrainingTrace::phase_only(int phase) const {
  TrainingTrace out = *this;
  out.epochs.clear();
  for (const auto& e : epochs) {
    if (e.phase != phase) continue;
    EpochRecord r = e;
    r.epoch = static_cast<int>(out.epochs.size()) + 1;
    out.epochs.push_back(std::move(r));
  }
  return out;
}

void TrainingTrace::validate() const {
  if (inventory_hash != visemelab::inventory_hash(labels)) {
    throw IncompatibleError("trace inventory hash does not match its labels");
  }
  int prev_phase = 1;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const auto& e = epochs[i];
    if (e.epoch != static_cast<int>(i) + 1) throw ParseError("trace", 0, "epochs not contiguous");
    if (e.phase < prev_phase || e.phase < 1 || e.phase > 2) {
      throw ParseError("trace", 0, "phase markers must be 1 or 2 and non-decreasing");
    }
    prev_phase = e.phase;
    if (!(e.overall >= 0.0 && e.overall <= 1.0)) {
      throw ParseError("trace", 0, "overall accuracy outside [0, 1]");
    }
    if (e.accuracy.size() != labels.size()) {
      throw ParseError("trace", 0, "accuracy row width does not match the inventory");
    }
    for (const auto& a : e.accuracy) {
      if (a && !(*a >= 0.0 && *a <= 1.0)) throw ParseError("trace", 0, "accuracy outside [0, 1]");
    }
  }
}

nlohmann::json protocol_to_json(const ProtocolSpec& p) {
  return {{"family", p.family()}, {"fraction", p.fraction}};
}

ProtocolSpec protocol_from_json(const nlohmann::json& j) {
  return parse_family(j.at("family").get<std::string>(), j.at("fraction").get<double>());
}

std::string serialize_trace(const TrainingTrace& trace) {
  nlohmann::json header = {
      {"format", "visemelab-trace"},
      {"version", 1},
      {"protocol", protocol_to_json(trace.protocol)},
      {"config", trace.config},
      {"labels", trace.labels},
      {"inventory_hash", hash_hex(trace.inventory_hash)},
      {"params_digest", hash_hex(trace.params_digest)},
      {"switch_epoch", trace.switch_epoch ? nlohmann::json(*trace.switch_epoch) : nlohmann::json()},
  };
  std::string out = header.dump() + "\n";
  for (const auto& e : trace.epochs) {
    out += std::to_string(e.epoch) + " " + std::to_string(e.phase) + " " + format_double(e.overall) +
           " ";
    for (std::size_t i = 0; i < e.accuracy.size(); ++i) {
      if (i) out += ',';
      out += e.accuracy[i] ? format_double(*e.accuracy[i]) : "-";
    }
    out += "\n";
  }
  return out;
}

namespace {

std::uint64_t parse_hex(const std::string& s, const std::string& source) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError(source, 1, "bad hash '" + s + "'");
  }
  return v;
}

double parse_number(std::string_view s, const std::string& source, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError(source, line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

TrainingTrace parse_trace(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty trace file");
  TrainingTrace t;
  try {
    auto h = nlohmann::json::parse(line);
    if (h.at("format") != "visemelab-trace") throw ParseError(source, 1, "not a trace file");
    t.protocol = protocol_from_json(h.at("protocol"));
    t.config = h.value("config", nlohmann::json::object());
    t.labels = h.at("labels").get<std::vector<std::string>>();
    t.inventory_hash = parse_hex(h.at("inventory_hash").get<std::string>(), source);
    t.params_digest = parse_hex(h.at("params_digest").get<std::string>(), source);
    if (!h.at("switch_epoch").is_null()) t.switch_epoch = h.at("switch_epoch").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 1, std::string("bad header: ") + e.what());
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 4 && !(fields.size() == 3 && t.labels.empty())) {
      throw ParseError(source, lineno, "expected 'epoch phase overall accuracies'");
    }
    EpochRecord r;
    r.epoch = static_cast<int>(parse_number(fields[0], source, lineno));
    r.phase = static_cast<int>(parse_number(fields[1], source, lineno));
    r.overall = parse_number(fields[2], source, lineno);
    if (fields.size() == 4) {
      std::string_view cells = fields[3];
      std::size_t pos = 0;
      while (true) {
        auto comma = cells.find(',', pos);
        auto cell = cells.substr(pos, comma == std::string_view::npos ? cells.npos : comma - pos);
        if (cell == "-") {
          r.accuracy.emplace_back(std::nullopt);
        } else {
          r.accuracy.emplace_back(parse_number(cell, source, lineno));
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
    }
    t.epochs.push_back(std::move(r));
  }
  t.validate();
  return t;
}

void save_trace(const std::string& path, const TrainingTrace& trace) {
  write_file_atomic(path, serialize_trace(trace));
}

TrainingTrace load_trace(const std::string& path) {
  return parse_trace(read_text_file(path), path);
}

}  // namespace visemelab
