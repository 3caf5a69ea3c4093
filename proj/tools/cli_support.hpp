#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "toml.hpp"
#include "yamabe/io/reports.hpp"

namespace cli {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kUsage = 1, kCertification = 2 };

/// Bad configuration value; reported as a usage error naming the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Check { none, positive, nonnegative, resolution, tolerance, unit_interval };

inline json toml_to_json(const toml::node& n) {
  if (const auto* t = n.as_table()) {
    json j = json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (const auto* a = n.as_array()) {
    json j = json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (const auto* v = n.as_integer()) return v->get();
  if (const auto* v = n.as_floating_point()) return v->get();
  if (const auto* v = n.as_boolean()) return v->get();
  if (const auto* v = n.as_string()) return v->get();
  throw ConfigError("unsupported TOML value type");
}

/// TOML unless the file ends in .json.
inline json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (std::filesystem::path(path).extension() == ".json") {
    try {
      return json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + path + "': " + e.what());
    }
  }
  try {
    return toml_to_json(toml::parse(buf.str(), path));
  } catch (const toml::parse_error& e) {
    throw ConfigError("config '" + path + "': " + std::string(e.description()));
  }
}

inline std::string normalize_key(std::string k) {
  for (char& c : k)
    if (c == '_') c = '-';
  return k;
}

/// Options registered once for CLI11 and for config files; flags given on the
/// command line win over file values.
class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {}

  template <class T>
  void add(const std::string& name, T& var, const std::string& help, Check check = Check::none) {
    CLI::Option* o = app_->add_option("--" + name, var, help)->capture_default_str();
    Entry e;
    e.name = name;
    e.option = o;
    e.assign = [&var, name](const json& v) {
      try {
        var = v.get<T>();
      } catch (const json::exception&) {
        throw ConfigError("config field '" + name + "' has the wrong type");
      }
    };
    e.echo = [&var] { return json(var); };
    e.check = [&var, name, check] { validate(name, var, check); };
    entries_.push_back(std::move(e));
  }

  void add_flag(const std::string& name, bool& var, const std::string& help) {
    CLI::Option* o = app_->add_flag("--" + name, var, help);
    Entry e;
    e.name = name;
    e.option = o;
    e.assign = [&var, name](const json& v) {
      if (!v.is_boolean()) throw ConfigError("config field '" + name + "' must be a boolean");
      var = v.get<bool>();
    };
    e.echo = [&var] { return json(var); };
    e.check = [] {};
    entries_.push_back(std::move(e));
  }

  /// Top-level keys first, then the tables named by `sections` in order.
  /// Unknown keys are ignored so one file can drive several commands.
  void apply(const json& cfg, const std::vector<std::string>& sections) {
    if (!cfg.is_object()) throw ConfigError("config root must be a table");
    apply_table(cfg);
    const json* t = &cfg;
    for (const std::string& s : sections) {
      t = find(*t, s);
      if (!t || !t->is_object()) break;
      apply_table(*t);
    }
  }

  void validate_all() const {
    for (const Entry& e : entries_) e.check();
  }

  json echo() const {
    json j = json::object();
    for (const Entry& e : entries_) j[e.name] = e.echo();
    return j;
  }

 private:
  struct Entry {
    std::string name;
    CLI::Option* option = nullptr;
    std::function<void(const json&)> assign;
    std::function<json()> echo;
    std::function<void()> check;
  };

  static const json* find(const json& t, const std::string& key) {
    for (auto it = t.begin(); it != t.end(); ++it)
      if (normalize_key(it.key()) == normalize_key(key)) return &it.value();
    return nullptr;
  }

  void apply_table(const json& t) {
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (it.value().is_object()) continue;
      const std::string key = normalize_key(it.key());
      for (Entry& e : entries_)
        if (e.name == key && e.option->count() == 0) e.assign(it.value());
    }
  }

  template <class T>
  static void validate(const std::string& name, const T& v, Check check) {
    if constexpr (std::is_arithmetic_v<T>) {
      check_value(name, static_cast<double>(v), check);
    } else if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<int>>) {
      for (auto x : v) check_value(name, static_cast<double>(x), check);
    }
  }

  static void check_value(const std::string& name, double v, Check check) {
    switch (check) {
      case Check::none: return;
      case Check::positive:
        if (!(v > 0.0)) throw ConfigError("field '" + name + "' must be positive");
        return;
      case Check::nonnegative:
        if (!(v >= 0.0)) throw ConfigError("field '" + name + "' must be nonnegative");
        return;
      case Check::resolution:
        if (!(v >= 4.0)) throw ConfigError("field '" + name + "' must be >= 4");
        return;
      case Check::tolerance:
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("field '" + name + "' must lie in (0, 1)");
        return;
      case Check::unit_interval:
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("field '" + name + "' must lie in (0, 1]");
        return;
    }
  }

  CLI::App* app_;
  std::vector<Entry> entries_;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

/// Collects emitted files; every file is hashed into the manifest.
class Run {
 public:
  Run(std::string command, std::filesystem::path out)
      : command_(std::move(command)), out_(std::move(out)), t0_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(out_);
  }

  void write(const std::string& name, const std::string& content) {
    const std::filesystem::path p = out_ / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << content;
    files_.push_back({{"path", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void check(const std::string& name, bool ok) {
    checks_.push_back({{"name", name}, {"pass", ok}});
    pass_ = pass_ && ok;
  }

  bool pass() const { return pass_; }
  const std::filesystem::path& out() const { return out_; }

  void finish(const json& config) {
    json m = yamabe::io::envelope("manifest");
    m["toolkit_version"] = yamabe::io::kToolkitVersion;
    m["command"] = command_;
    m["config"] = config;
    m["checks"] = checks_;
    m["pass"] = pass_;
    m["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    m["files"] = files_;
    std::ofstream f(out_ / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::filesystem::path out_;
  std::chrono::steady_clock::time_point t0_;
  json files_ = json::array();
  json checks_ = json::array();
  bool pass_ = true;
};

inline std::string default_out_dir() {
  if (const char* e = std::getenv("YAMABE_OUT"); e && *e) return e;
  return "yamabe_out";
}

}  // namespace cli
