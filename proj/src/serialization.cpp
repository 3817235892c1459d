#include "voxelforge/serialization.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <type_traits>

namespace voxelforge::io {

namespace {

constexpr std::array<const char*, 4> kNetworkKeys = {"c1", "c2", "c3", "c4"};

const Json& member(const Json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(path + "/" + key, "missing");
  return *it;
}

void require_object(const Json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw FormatError(path + "/" + item.key(), "unknown key");
  }
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, "expected an array");
  return j;
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw FormatError(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw FormatError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw FormatError(path, "expected a non-negative integer");
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path, "expected a number");
  return j.get<double>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw FormatError(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw FormatError(path, "expected a string");
  return j.get<std::string>();
}

Json network_to_json(const genome::Cppn& net) {
  Json nodes = Json::array();
  for (const auto& n : net.nodes()) {
    nodes.push_back({{"id", n.id}, {"activation", std::string(genome::to_string(n.activation))}});
  }
  Json links = Json::array();
  for (const auto& l : net.links()) {
    links.push_back(
        {{"src", l.source}, {"dst", l.target}, {"weight", l.weight}, {"enabled", l.enabled}});
  }
  return {{"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

genome::Cppn network_from_json(const Json& j, const std::string& path) {
  require_object(j, path, {"nodes", "links"});
  std::vector<genome::CppnNode> nodes;
  const std::string nodes_path = path + "/nodes";
  const Json& jn = require_array(member(j, path, "nodes"), nodes_path);
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const std::string p = nodes_path + "/" + std::to_string(i);
    require_object(jn[i], p, {"id", "activation"});
    genome::CppnNode node;
    node.id = as_int(member(jn[i], p, "id"), p + "/id");
    const std::string act = as_string(member(jn[i], p, "activation"), p + "/activation");
    try {
      node.activation = genome::parse_activation(act);
    } catch (const std::invalid_argument&) {
      throw FormatError(p + "/activation", "unknown activation '" + act + "'");
    }
    nodes.push_back(node);
  }
  std::vector<genome::CppnLink> links;
  const std::string links_path = path + "/links";
  const Json& jl = require_array(member(j, path, "links"), links_path);
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string p = links_path + "/" + std::to_string(i);
    require_object(jl[i], p, {"src", "dst", "weight", "enabled"});
    genome::CppnLink link;
    link.source = as_int(member(jl[i], p, "src"), p + "/src");
    link.target = as_int(member(jl[i], p, "dst"), p + "/dst");
    link.weight = as_double(member(jl[i], p, "weight"), p + "/weight");
    link.enabled = as_bool(member(jl[i], p, "enabled"), p + "/enabled");
    links.push_back(link);
  }
  try {
    return genome::Cppn(std::move(nodes), std::move(links));
  } catch (const genome::InvalidNetwork& e) {
    throw FormatError(path, e.what());
  }
}

// Line (1-based) of the first occurrence of "key" in a JSON text, or 0.
std::size_t line_of_key(std::string_view text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// The flat configuration keys with their readers and writers; the first
// kLatticeFieldCount entries are the lattice fields.
constexpr std::size_t kLatticeFieldCount = 16;

struct Field {
  const char* key;
  std::function<Json(const RunConfig&)> get;
  std::function<void(RunConfig&, const Json&, const std::string&)> set;
};

template <typename T>
Field lattice_double(const char* key, T LatticeConfig::*member_ptr) {
  return {key, [member_ptr](const RunConfig& c) { return Json(c.evolution.lattice.*member_ptr); },
          [member_ptr](RunConfig& c, const Json& j, const std::string& p) {
            if constexpr (std::is_same_v<T, int>) {
              c.evolution.lattice.*member_ptr = as_int(j, p);
            } else {
              c.evolution.lattice.*member_ptr = as_double(j, p);
            }
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f = {
        lattice_double("voxel_edge_length", &LatticeConfig::voxel_edge_length),
        lattice_double("density", &LatticeConfig::density),
        lattice_double("gravity", &LatticeConfig::gravity),
        lattice_double("ground_stiffness", &LatticeConfig::ground_stiffness),
        lattice_double("friction_coefficient", &LatticeConfig::friction_coefficient),
        lattice_double("damping_ratio", &LatticeConfig::damping_ratio),
        lattice_double("dt_safety_factor", &LatticeConfig::dt_safety_factor),
        lattice_double("settle_duration", &LatticeConfig::settle_duration),
        lattice_double("sim_cycles", &LatticeConfig::sim_cycles),
        lattice_double("actuation_amplitude", &LatticeConfig::actuation_amplitude),
        lattice_double("actuation_frequency", &LatticeConfig::actuation_frequency),
        lattice_double("k_min", &LatticeConfig::k_min),
        lattice_double("k_max", &LatticeConfig::k_max),
        lattice_double("signal_filter_time_constant",
                       &LatticeConfig::signal_filter_time_constant),
        lattice_double("shear_stiffness_ratio", &LatticeConfig::shear_stiffness_ratio),
        lattice_double("trajectory_interval", &LatticeConfig::trajectory_interval),
    };
    auto count = [](const char* key, auto getter, auto setter) {
      return Field{key, [getter](const RunConfig& c) { return Json(getter(c)); },
                   [setter](RunConfig& c, const Json& j, const std::string& p) {
                     setter(c, j, p);
                   }};
    };
    f.push_back(count(
        "population_size", [](const RunConfig& c) { return c.evolution.population_size; },
        [](RunConfig& c, const Json& j, const std::string& p) {
          c.evolution.population_size = as_u64(j, p);
        }));
    f.push_back(count(
        "generations", [](const RunConfig& c) { return c.evolution.generations; },
        [](RunConfig& c, const Json& j, const std::string& p) {
          c.evolution.generations = as_int(j, p);
        }));
    f.push_back(count(
        "seed", [](const RunConfig& c) { return c.evolution.seed; },
        [](RunConfig& c, const Json& j, const std::string& p) { c.evolution.seed = as_u64(j, p); }));
    f.push_back(count(
        "development_rule",
        [](const RunConfig& c) {
          return std::string(development::to_string(c.evolution.development_rule));
        },
        [](RunConfig& c, const Json& j, const std::string& p) {
          const std::string name = as_string(j, p);
          try {
            c.evolution.development_rule = development::parse_rule(name);
          } catch (const std::invalid_argument&) {
            throw FormatError(p, "unknown development rule '" + name + "'");
          }
        }));
    f.push_back(count(
        "checkpoint_interval", [](const RunConfig& c) { return c.evolution.checkpoint_interval; },
        [](RunConfig& c, const Json& j, const std::string& p) {
          c.evolution.checkpoint_interval = as_int(j, p);
        }));
    f.push_back(count(
        "dims_x", [](const RunConfig& c) { return c.evolution.dims.x; },
        [](RunConfig& c, const Json& j, const std::string& p) { c.evolution.dims.x = as_int(j, p); }));
    f.push_back(count(
        "dims_y", [](const RunConfig& c) { return c.evolution.dims.y; },
        [](RunConfig& c, const Json& j, const std::string& p) { c.evolution.dims.y = as_int(j, p); }));
    f.push_back(count(
        "dims_z", [](const RunConfig& c) { return c.evolution.dims.z; },
        [](RunConfig& c, const Json& j, const std::string& p) { c.evolution.dims.z = as_int(j, p); }));
    f.push_back(count(
        "robustness_samples", [](const RunConfig& c) { return c.robustness_samples; },
        [](RunConfig& c, const Json& j, const std::string& p) {
          c.robustness_samples = as_u64(j, p);
        }));
    f.push_back(count(
        "bootstrap_resamples", [](const RunConfig& c) { return c.bootstrap_resamples; },
        [](RunConfig& c, const Json& j, const std::string& p) {
          c.bootstrap_resamples = as_u64(j, p);
        }));
    return f;
  }();
  return all;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& cell, std::size_t line) {
  T v{};
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size()) {
    throw FormatError("line " + std::to_string(line), "bad number '" + cell + "'");
  }
  return v;
}

std::string format_sig6(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return buf.data();
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

Json genome_to_json(const genome::Genome& g) {
  Json networks = Json::object();
  for (std::size_t c = 0; c < g.networks.size(); ++c) {
    networks[kNetworkKeys[c]] = network_to_json(g.networks[c]);
  }
  Json j;
  j["id"] = g.id;
  j["parent_id"] = g.parent_id ? Json(*g.parent_id) : Json(nullptr);
  j["networks"] = std::move(networks);
  return j;
}

genome::Genome genome_from_json(const Json& j) {
  require_object(j, "", {"id", "parent_id", "networks", "fitness", "age", "generation"});
  genome::Genome g;
  g.id = as_u64(member(j, "", "id"), "/id");
  const Json& parent = member(j, "", "parent_id");
  if (!parent.is_null()) g.parent_id = as_u64(parent, "/parent_id");
  const Json& nets = member(j, "", "networks");
  require_object(nets, "/networks", {"c1", "c2", "c3", "c4"});
  for (std::size_t c = 0; c < kNetworkKeys.size(); ++c) {
    g.networks[c] = network_from_json(member(nets, "/networks", kNetworkKeys[c]),
                                      std::string("/networks/") + kNetworkKeys[c]);
  }
  return g;
}

void RunConfig::validate() const {
  std::vector<std::string> keys;
  std::string message;
  try {
    evolution.validate();
  } catch (const ConfigError& e) {
    keys = e.keys();
    message = e.what();
  }
  if (robustness_samples < 1) {
    keys.emplace_back("robustness_samples");
    message += message.empty() ? "" : "; ";
    message += "robustness_samples must be >= 1";
  }
  if (bootstrap_resamples < 1000) {
    keys.emplace_back("bootstrap_resamples");
    message += message.empty() ? "" : "; ";
    message += "bootstrap_resamples must be >= 1000";
  }
  if (!keys.empty()) throw ConfigError(std::move(keys), message);
}

Json run_config_to_json(const RunConfig& c) {
  Json j = Json::object();
  for (const Field& f : fields()) j[f.key] = f.get(c);
  return j;
}

Json lattice_to_json(const LatticeConfig& c) {
  RunConfig rc;
  rc.evolution.lattice = c;
  Json all = run_config_to_json(rc);
  Json j = Json::object();
  for (std::size_t i = 0; i < kLatticeFieldCount; ++i) j[fields()[i].key] = all[fields()[i].key];
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("", "configuration must be a JSON object");
  RunConfig c;
  std::set<std::string> known;
  for (const Field& f : fields()) known.insert(f.key);
  std::vector<std::string> unknown;
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) unknown.push_back(item.key());
  }
  if (!unknown.empty()) {
    std::string message = "unknown configuration key";
    for (const auto& k : unknown) message += " '" + k + "'";
    throw ConfigError(unknown, message);
  }
  for (const Field& f : fields()) {
    const auto it = j.find(f.key);
    if (it == j.end()) continue;
    try {
      f.set(c, *it, std::string("/") + f.key);
    } catch (const FormatError& e) {
      throw ConfigError({f.key}, e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig parse_run_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError({}, "line " + std::to_string(line_of_offset(text, e.byte)) +
                              ": invalid JSON: " + e.what());
  }
  try {
    return run_config_from_json(j);
  } catch (const ConfigError& e) {
    const std::size_t line = e.keys().empty() ? 0 : line_of_key(text, e.keys().front());
    if (line == 0) throw;
    throw ConfigError(e.keys(), "line " + std::to_string(line) + ": " + e.what());
  } catch (const FormatError& e) {
    throw ConfigError({}, e.what());
  }
}

void write_run_log(std::ostream& out, const std::vector<evolution::GenerationRecord>& rows) {
  out << "generation,best_fitness,mean_fitness,median_fitness,best_age,best_id\n";
  for (const auto& r : rows) {
    out << r.generation << ',' << format_double(r.best_fitness) << ','
        << format_double(r.mean_fitness) << ',' << format_double(r.median_fitness) << ','
        << r.best_age << ',' << r.best_id << '\n';
  }
}

std::vector<evolution::GenerationRecord> read_run_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "generation,best_fitness,mean_fitness,median_fitness,best_age,best_id") {
    throw FormatError("line 1", "unexpected log header");
  }
  std::vector<evolution::GenerationRecord> rows;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 6) throw FormatError("line " + std::to_string(n), "expected 6 columns");
    evolution::GenerationRecord r;
    r.generation = parse_number<int>(cells[0], n);
    r.best_fitness = parse_number<double>(cells[1], n);
    r.mean_fitness = parse_number<double>(cells[2], n);
    r.median_fitness = parse_number<double>(cells[3], n);
    r.best_age = parse_number<int>(cells[4], n);
    r.best_id = parse_number<genome::GenomeId>(cells[5], n);
    rows.push_back(r);
  }
  return rows;
}

void write_trajectory(std::ostream& out, const physics::SimResult& result) {
  out << "t,com_x,com_y,com_z\n";
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    const Vec3& p = result.trajectory[i];
    out << format_sig6(result.trajectory_time[i]) << ',' << format_sig6(p.x) << ','
        << format_sig6(p.y) << ',' << format_sig6(p.z) << '\n';
  }
}

std::vector<TrajectorySample> read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,com_x,com_y,com_z") {
    throw FormatError("line 1", "unexpected trajectory header");
  }
  std::vector<TrajectorySample> out;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw FormatError("line " + std::to_string(n), "expected 4 columns");
    out.push_back({parse_number<double>(cells[0], n),
                   {parse_number<double>(cells[1], n), parse_number<double>(cells[2], n),
                    parse_number<double>(cells[3], n)}});
  }
  return out;
}

Json final_state_to_json(const Phenotype& phenotype, const physics::SimResult& result) {
  Json voxels = Json::array();
  const auto& cells = phenotype.voxels();
  for (std::size_t v = 0; v < cells.size(); ++v) {
    const auto c = phenotype.dims().coords(cells[v]);
    voxels.push_back({{"index", {c[0], c[1], c[2]}},
                      {"k_congenital", phenotype.stiffness()[cells[v]]},
                      {"k_final", result.final_stiffness[v]},
                      {"peak_stress", result.peak_stress[v]},
                      {"peak_pressure", result.peak_pressure[v]}});
  }
  return {{"displacement_xy", result.displacement_xy},
          {"unstable", result.unstable},
          {"voxels", std::move(voxels)}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot write " + path.string() + ": " + ec.message());
}

genome::Genome load_genome(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("", "invalid JSON at line " +
                              std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  return genome_from_json(j);
}

}  // namespace voxelforge::io
