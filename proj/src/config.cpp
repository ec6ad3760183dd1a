#include "su2kam/config.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "su2kam/errors.hpp"

namespace kam {

using nlohmann::json;

namespace {

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : text_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        skip_spaces();
        const auto path = read_key_path();
        skip_spaces();
        expect(']');
        table = &descend(root, path);
        if (!defined_tables_.insert(join(path)).second) fail("table [" + join(path) + "] defined twice");
      } else {
        const auto path = read_key_path();
        skip_spaces();
        expect('=');
        skip_spaces();
        json value = read_value();
        json& parent = descend(*table, std::vector<std::string>(path.begin(), path.end() - 1));
        if (parent.contains(path.back())) fail("duplicate key '" + path.back() + "'");
        parent[path.back()] = std::move(value);
      }
      finish_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() != '\n') return;
      ++pos_;
      ++line_;
    }
  }
  void finish_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "'");
    ++pos_;
    ++line_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::vector<std::string> read_key_path() {
    std::vector<std::string> path;
    while (true) {
      std::string key;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
        key += text_[pos_++];
      if (key.empty()) fail("expected a key");
      path.push_back(key);
      skip_spaces();
      if (peek() != '.') return path;
      ++pos_;
      skip_spaces();
    }
  }

  json& descend(json& from, const std::vector<std::string>& path) {
    json* cur = &from;
    for (const auto& key : path) {
      if (!cur->contains(key)) (*cur)[key] = json::object();
      cur = &(*cur)[key];
      if (!cur->is_object()) fail("'" + key + "' is not a table");
    }
    return *cur;
  }

  static std::string join(const std::vector<std::string>& path) {
    std::string s;
    for (const auto& p : path) s += (s.empty() ? "" : ".") + p;
    return s;
  }

  json read_value() {
    const char c = peek();
    if (c == '"') return read_string();
    if (c == '[') return read_array();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return read_number();
  }

  json read_string() {
    expect('"');
    std::string s;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '"') return s;
      if (c != '\\') {
        s += c;
        continue;
      }
      const char e = text_[pos_++];
      switch (e) {
        case 'n': s += '\n'; break;
        case 't': s += '\t'; break;
        case '"': s += '"'; break;
        case '\\': s += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  json read_array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_blank_lines();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(read_value());
      skip_blank_lines();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      skip_blank_lines();
      expect(']');
      return arr;
    }
  }

  json read_number() {
    std::size_t end = pos_;
    while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                                  text_[end] == '+' || text_[end] == '-'))
      ++end;
    std::string_view tok = text_.substr(pos_, end - pos_);
    if (tok.empty()) fail("expected a value");
    const std::string_view body = tok.front() == '+' ? tok.substr(1) : tok;
    const bool is_float = body.find_first_of(".eE") != std::string_view::npos || body == "inf" || body == "-inf" ||
                          body == "nan";
    if (!is_float) {
      long long v = 0;
      const auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec != std::errc() || p != body.data() + body.size()) fail("bad integer '" + std::string(tok) + "'");
      pos_ = end;
      return v;
    }
    double v = 0;
    const auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || p != body.data() + body.size()) fail("bad number '" + std::string(tok) + "'");
    pos_ = end;
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::set<std::string> defined_tables_;
};

// --- typed access -----------------------------------------------------------

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be a table");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

double get_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError("'" + name + "' must be a number");
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError("'" + name + "' must be an integer");
  return v.get<long long>();
}

template <class T>
void read_if(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError("'" + name + "' must be a boolean");
    out = v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    out = static_cast<T>(get_integer(v, name));
  } else if constexpr (std::is_floating_point_v<T>) {
    out = static_cast<T>(get_number(v, name));
  } else {
    if (!v.is_string()) throw ConfigError("'" + name + "' must be a string");
    out = v.get<std::string>();
  }
}

Freq read_freq(const json& v, const std::string& name) {
  if (v.is_number_integer()) return Freq{static_cast<int>(v.get<long long>())};
  if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(kMaxDim))
    throw ConfigError("'" + name + "' frequency must be an integer or a list of up to 3 integers");
  Freq k(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) k[static_cast<int>(i)] = static_cast<int>(get_integer(v[i], name));
  return k;
}

MapSpec read_map_spec(const json& obj, const std::string& where) {
  check_keys(obj, where, {"kind", "modes", "band", "amplitude", "decay", "file", "scale_to", "resonances"});
  MapSpec spec;
  std::string kind = "none";
  read_if(obj, "kind", where, kind);
  if (kind == "none")
    spec.kind = MapSpec::Kind::None;
  else if (kind == "modes")
    spec.kind = MapSpec::Kind::Modes;
  else if (kind == "random")
    spec.kind = MapSpec::Kind::Random;
  else if (kind == "file")
    spec.kind = MapSpec::Kind::File;
  else
    throw ConfigError("'" + where + ".kind' must be none, modes, random or file");
  read_if(obj, "band", where, spec.band);
  read_if(obj, "amplitude", where, spec.amplitude);
  read_if(obj, "decay", where, spec.decay);
  read_if(obj, "file", where, spec.file);
  if (obj.contains("scale_to")) spec.scale_to = get_number(obj.at("scale_to"), where + ".scale_to");
  if (obj.contains("modes")) {
    const json& modes = obj.at("modes");
    if (!modes.is_array()) throw ConfigError("'" + where + ".modes' must be a list");
    for (const auto& m : modes) {
      if (!m.is_array() || m.size() != 4 || !m[0].is_string())
        throw ConfigError("'" + where + ".modes' entries are [\"t\"|\"z\", k, re, im]");
      ModeSpec ms;
      const std::string ch = m[0].get<std::string>();
      if (ch != "t" && ch != "z") throw ConfigError("mode channel must be \"t\" or \"z\"");
      ms.channel = ch[0];
      ms.k = read_freq(m[1], where + ".modes");
      ms.re = get_number(m[2], where + ".modes");
      ms.im = get_number(m[3], where + ".modes");
      spec.modes.push_back(ms);
    }
  }
  if (spec.kind == MapSpec::Kind::Modes && spec.modes.empty()) throw ConfigError("'" + where + "' has no modes");
  if (spec.kind == MapSpec::Kind::File && spec.file.empty()) throw ConfigError("'" + where + ".file' missing");
  if (spec.band < 0 || !(spec.decay > 0)) throw ConfigError("'" + where + "' needs band >= 0 and decay > 0");
  return spec;
}

}  // namespace

json parse_toml(std::string_view text) { return TomlReader(text).parse(); }

json load_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str());
}

ExperimentConfig parse_experiment_config(const json& doc) {
  check_keys(doc, "", {"seed", "alpha", "constant", "dc", "perturbation", "plant", "cascade", "toy", "params", "output"});
  ExperimentConfig cfg;
  if (doc.contains("seed")) {
    const long long s = get_integer(doc.at("seed"), "seed");
    if (s < 0) throw ConfigError("'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("alpha")) {
    const json& a = doc.at("alpha");
    check_keys(a, "alpha", {"cf", "periodic", "value"});
    read_if(a, "periodic", "alpha", cfg.alpha_periodic);
    if (a.contains("cf")) {
      if (!a.at("cf").is_array() || a.at("cf").empty()) throw ConfigError("'alpha.cf' must be a non-empty list");
      for (const auto& q : a.at("cf")) {
        const long long v = get_integer(q, "alpha.cf");
        if (v < 1) throw ConfigError("'alpha.cf' quotients must be positive");
        cfg.alpha_cf.push_back(v);
      }
    }
    if (a.contains("value")) {
      const json& v = a.at("value");
      if (v.is_number()) {
        cfg.alpha_literal = {v.get<double>()};
      } else if (v.is_array() && !v.empty() && v.size() <= static_cast<std::size_t>(kMaxDim)) {
        for (const auto& x : v) cfg.alpha_literal.push_back(get_number(x, "alpha.value"));
      } else {
        throw ConfigError("'alpha.value' must be a number or a list of up to 3 numbers");
      }
    }
    if (!cfg.alpha_cf.empty() && !cfg.alpha_literal.empty())
      throw ConfigError("give either alpha.cf or alpha.value, not both");
  }
  if (cfg.alpha_cf.empty() && cfg.alpha_literal.empty()) cfg.alpha_cf = {1};
  if (doc.contains("constant")) {
    check_keys(doc.at("constant"), "constant", {"angle"});
    read_if(doc.at("constant"), "angle", "constant", cfg.angle);
  }
  if (doc.contains("dc")) {
    const json& d = doc.at("dc");
    check_keys(d, "dc", {"gamma_inv", "tau", "k_max"});
    read_if(d, "gamma_inv", "dc", cfg.dc_alpha.gamma_inv);
    read_if(d, "tau", "dc", cfg.dc_alpha.tau);
    read_if(d, "k_max", "dc", cfg.dc_alpha.K_max);
  }
  if (doc.contains("perturbation")) cfg.perturbation = read_map_spec(doc.at("perturbation"), "perturbation");
  if (doc.contains("plant")) {
    cfg.plant = read_map_spec(doc.at("plant"), "plant");
    read_if(doc.at("plant"), "resonances", "plant", cfg.planted_resonances);
  }
  if (doc.contains("cascade")) {
    const json& c = doc.at("cascade");
    check_keys(c, "cascade", {"steps", "min_k", "min_margin", "max_samples"});
    if (c.contains("steps")) {
      if (!c.at("steps").is_array()) throw ConfigError("'cascade.steps' must be a list");
      cfg.cascade_steps.clear();
      for (const auto& s : c.at("steps")) cfg.cascade_steps.push_back(static_cast<int>(get_integer(s, "cascade.steps")));
    }
    read_if(c, "min_k", "cascade", cfg.cascade.min_k);
    read_if(c, "min_margin", "cascade", cfg.cascade.min_margin);
    read_if(c, "max_samples", "cascade", cfg.cascade.max_samples);
  }
  if (doc.contains("toy")) {
    const json& t = doc.at("toy");
    check_keys(t, "toy", {"cases", "k_max", "tol"});
    read_if(t, "cases", "toy", cfg.toy_cases);
    read_if(t, "k_max", "toy", cfg.toy_k_max);
    read_if(t, "tol", "toy", cfg.toy_tol);
  }
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    check_keys(p, "params",
               {"N1", "sigma", "nu", "gamma_inv", "tau", "C", "s0", "eps_gate", "max_steps", "min_steps", "oversampling",
                "precision", "floor", "normal_form_tol", "c10", "band", "max_band", "dc_horizon", "measure_aliasing",
                "track_conjugacy"});
    SchemeParams& s = cfg.scheme;
    read_if(p, "N1", "params", s.N1);
    read_if(p, "sigma", "params", s.sigma);
    read_if(p, "nu", "params", s.nu);
    read_if(p, "gamma_inv", "params", s.gamma_inv);
    read_if(p, "tau", "params", s.tau);
    read_if(p, "C", "params", s.C);
    read_if(p, "s0", "params", s.s0);
    read_if(p, "eps_gate", "params", s.eps_gate);
    read_if(p, "max_steps", "params", s.max_steps);
    read_if(p, "min_steps", "params", s.min_steps);
    read_if(p, "oversampling", "params", s.oversampling);
    read_if(p, "precision", "params", s.precision);
    read_if(p, "floor", "params", s.floor);
    read_if(p, "normal_form_tol", "params", s.normal_form_tol);
    read_if(p, "c10", "params", s.c10);
    read_if(p, "band", "params", s.band);
    read_if(p, "max_band", "params", s.max_band);
    read_if(p, "dc_horizon", "params", s.dc_horizon);
    read_if(p, "measure_aliasing", "params", s.measure_aliasing);
    read_if(p, "track_conjugacy", "params", s.track_conjugacy);
  }
  if (doc.contains("output")) {
    check_keys(doc.at("output"), "output", {"dir"});
    read_if(doc.at("output"), "dir", "output", cfg.out_dir);
  }
  try {
    cfg.scheme.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  ExperimentConfig cfg = parse_experiment_config(load_toml_file(path));
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  if (cfg.base_dir.empty()) cfg.base_dir = ".";
  return cfg;
}

namespace {

template <class Real>
void read_channel(const json& arr, ScalarSeries<Real>& s, const std::string& name) {
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 3) throw ConfigError("'" + name + "' entries are [k, re, im]");
    s.set(read_freq(e[0], name), Complex<Real>(Real(get_number(e[1], name)), Real(get_number(e[2], name))));
  }
}

}  // namespace

template <class Real>
AlgebraMap<Real> build_map(const MapSpec& spec, int dim, std::optional<std::uint64_t> seed, const std::string& base_dir) {
  switch (spec.kind) {
    case MapSpec::Kind::None:
      return AlgebraMap<Real>(dim, 0);
    case MapSpec::Kind::Modes: {
      int band = 0;
      for (const auto& m : spec.modes) {
        if (m.k.dim() != dim) throw ConfigError("mode frequency dimension differs from alpha");
        band = std::max(band, m.k.max_norm());
      }
      AlgebraMap<Real> F(dim, band);
      for (const auto& m : spec.modes) {
        const Complex<Real> v(Real(m.re), Real(m.im));
        if (m.channel == 'z') {
          F.z.set(m.k, v);
        } else {
          if (m.k.is_zero() && m.im != 0) throw ConfigError("the t-channel mean must be real");
          F.t.set(m.k, v);
        }
      }
      return F;
    }
    case MapSpec::Kind::Random: {
      if (!seed) throw ConfigError("random perturbation needs a seed (config 'seed' or --seed)");
      Rng rng(*seed);
      return random_algebra_map<Real>(dim, spec.band, spec.amplitude, spec.decay, rng);
    }
    case MapSpec::Kind::File: {
      const std::filesystem::path p = std::filesystem::path(spec.file).is_absolute()
                                          ? std::filesystem::path(spec.file)
                                          : std::filesystem::path(base_dir) / spec.file;
      std::ifstream in(p);
      if (!in) throw ConfigError("cannot open planted cocycle file '" + p.string() + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError("planted cocycle file: " + std::string(e.what()));
      }
      if (!doc.contains("F") || !doc.at("F").contains("band")) throw ConfigError("planted cocycle file lacks F");
      const json& f = doc.at("F");
      AlgebraMap<Real> F(dim, static_cast<int>(get_integer(f.at("band"), "F.band")));
      read_channel(f.value("t", json::array()), F.t, "F.t");
      read_channel(f.value("z", json::array()), F.z, "F.z");
      return F;
    }
  }
  return AlgebraMap<Real>(dim, 0);
}

template AlgebraMap<double> build_map<double>(const MapSpec&, int, std::optional<std::uint64_t>, const std::string&);
template AlgebraMap<long double> build_map<long double>(const MapSpec&, int, std::optional<std::uint64_t>,
                                                        const std::string&);

}  // namespace kam
