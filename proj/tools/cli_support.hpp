#ifndef CAPLAB_TOOLS_CLI_SUPPORT_HPP
#define CAPLAB_TOOLS_CLI_SUPPORT_HPP

// Argument parsing helpers, output sinks and run manifests for the CLI.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "caplab/core.hpp"
#include "caplab/parallel.hpp"

namespace caplab::cli {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// scalars

inline double parse_real(const std::string& tok) {
  const auto slash = tok.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double a = std::stod(tok.substr(0, slash), &used);
      if (used != slash) throw InputError("");
      const std::string rest = tok.substr(slash + 1);
      const double b = std::stod(rest, &used);
      if (used != rest.size() || b == 0.0) throw InputError("");
      return a / b;
    }
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot read \"" + tok + "\" as a number");
  }
}

inline std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

/// "re,im", "x", "1/3", "0.1+0.2i", "-0.5i".
inline cplx parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw InputError("empty complex number");
  if (const auto comma = s.find(','); comma != std::string::npos)
    return {parse_real(trim(s.substr(0, comma))), parse_real(trim(s.substr(comma + 1)))};
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not an exponent sign or the leading one
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      const std::string im = body.substr(k);
      return {parse_real(body.substr(0, k)), im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real(im)};
    }
  }
  if (body.empty() || body == "+") return {0.0, 1.0};
  if (body == "-") return {0.0, -1.0};
  return {0.0, parse_real(body)};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

/// Comma-separated complex values (each in the a+bi form).
inline std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  for (const auto& tok : split(s, ','))
    if (!tok.empty()) out.push_back(parse_complex(tok));
  if (out.empty()) throw InputError("empty list");
  return out;
}

inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ','))
    if (!tok.empty()) out.push_back(parse_real(tok));
  if (out.empty()) throw InputError("empty list");
  return out;
}

/// "6-13" or "8,10,12".
inline std::vector<int> parse_int_ranges(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) {
    if (tok.empty()) continue;
    const auto dash = tok.find('-', 1);
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(tok));
      } else {
        const int a = std::stoi(tok.substr(0, dash)), b = std::stoi(tok.substr(dash + 1));
        if (b < a) throw InputError("");
        for (int k = a; k <= b; ++k) out.push_back(k);
      }
    } catch (const std::exception&) {
      throw InputError("cannot read \"" + tok + "\" as an integer or range");
    }
  }
  if (out.empty()) throw InputError("empty integer list");
  return out;
}

// ---------------------------------------------------------------------------
// seeds

struct Seed {
  std::uint64_t value = 1;
  std::string source = "default";
};

inline Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return {*flag, "flag"};
  if (const char* env = std::getenv("CAPLAB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw InputError("");
      return {v, "CAPLAB_SEED"};
    } catch (const std::exception&) {
      throw InputError(std::string("CAPLAB_SEED is not an unsigned integer: ") + env);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// outputs and manifest

class Run {
 public:
  explicit Run(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  json params = json::object();
  json results = json::object();  // small summaries worth keeping next to the outputs
  Seed seed;
  std::string manifest_path;  // explicit --manifest

  /// Writes text to `path` ("-" = standard output) and records it.
  void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
      std::cout << text;
      std::cout.flush();
      outputs_.push_back("-");
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << text;
    if (!os) throw Error("write failed: " + path);
    outputs_.push_back(path);
  }
  void record_file(const std::string& path) { outputs_.push_back(path); }

  json manifest() const {
    json m;
    m["tool"] = "caplab";
    m["version"] = kVersion;
    m["command"] = command_;
    m["parameters"] = params;
    m["seed"] = {{"value", seed.value}, {"source", seed.source}};
    m["threads"] = thread_count();
    m["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m["outputs"] = outputs_;
    if (!results.empty()) m["results"] = results;
    return m;
  }

  /// One manifest next to every output file; with only standard output the
  /// manifest goes to --manifest if given, else to standard error.
  void finish() const {
    const std::string text = manifest().dump(2) + "\n";
    bool wrote_file = false;
    for (const auto& o : outputs_) {
      if (o == "-") continue;
      std::ofstream(o + ".manifest.json") << text;
      wrote_file = true;
    }
    if (!manifest_path.empty()) {
      std::ofstream os(manifest_path);
      if (!os) throw Error("cannot open " + manifest_path + " for writing");
      os << text;
    } else if (!wrote_file) {
      std::cerr << text;
    }
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
};

/// Every option of the parsed subcommand chain: given values, else defaults.
inline json collect_params(const CLI::App* app) {
  json p = json::object();
  for (const CLI::App* a = app; a; a = a->get_subcommands().empty() ? nullptr : a->get_subcommands().front()) {
    for (const CLI::Option* o : a->get_options()) {
      const std::string key = o->get_single_name();
      if (key.empty() || key == "help" || key == "help-all" || key == "version" || key == "manifest") continue;
      if (o->count() > 0) {
        const auto& r = o->results();
        if (o->get_expected_max() == 0)
          p[key] = true;
        else if (r.size() == 1)
          p[key] = r.front();
        else
          p[key] = r;
      } else if (!o->get_default_str().empty()) {
        p[key] = o->get_default_str();
      } else if (o->get_expected_max() == 0) {
        p[key] = false;
      }
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// suggestions for unknown flags

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline void collect_flags(const CLI::App* app, std::vector<std::string>& out) {
  for (const CLI::Option* o : app->get_options())
    for (const auto& n : o->get_lnames()) out.push_back("--" + n);
  for (const CLI::App* s : app->get_subcommands([](const CLI::App*) { return true; })) collect_flags(s, out);
}

/// "did you mean --x?" for the first argv flag the app does not know.
inline std::string suggestion(const CLI::App& app, int argc, const char* const* argv) {
  std::vector<std::string> known;
  collect_flags(&app, known);
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind("--", 0) != 0) continue;
    a = a.substr(0, a.find('='));
    if (std::find(known.begin(), known.end(), a) != known.end()) continue;
    std::string best;
    std::size_t dist = 4;
    for (const auto& k : known) {
      const auto d = edit_distance(a, k);
      if (d < dist) {
        dist = d;
        best = k;
      }
    }
    if (!best.empty()) return "did you mean " + best + " instead of " + a + "?";
  }
  return {};
}

}  // namespace caplab::cli

#endif  // CAPLAB_TOOLS_CLI_SUPPORT_HPP
