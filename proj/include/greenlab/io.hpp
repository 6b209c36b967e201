#pragma once

// Experiment config files, canonical hashing, and CSV/SVG emission.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "greenlab/errors.hpp"
#include "greenlab/verify.hpp"

namespace greenlab {

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw config_error("not a number: '" + s + "'");
  return v;
}

// Sectioned key = value text. Lines starting with '#' or ';' are comments.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }
  const std::string& get(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end() || !s->second.count(key))
      throw config_error("missing config key [" + sec + "] " + key);
    return s->second.at(key);
  }
  std::string get_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) const {
    return has(sec, key) ? get(sec, key) : fallback;
  }
  double get_num(const std::string& sec, const std::string& key) const {
    return parse_double(get(sec, key));
  }
  double get_num_or(const std::string& sec, const std::string& key,
                    double fallback) const {
    return has(sec, key) ? get_num(sec, key) : fallback;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_numbers(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok));
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace detail

inline ConfigFile parse_config_text(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(lineno) +
                           ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      cfg.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected 'key = value' inside a section");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(lineno) +
                                        ": empty key");
    cfg.sections[section][key] = val;
  }
  return cfg;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// Canonical form: sections and keys sorted, numeric tokens rewritten in
// shortest round-trip form, single spaces. The hash is FNV-1a 64 over it.
inline std::string canonical_config_text(const ConfigFile& cfg) {
  std::string out;
  for (const auto& [sec, kv] : cfg.sections) {
    out += "[" + sec + "]\n";
    for (const auto& [key, val] : kv) {
      out += key + " =";
      std::istringstream in(val);
      std::string tok;
      while (in >> tok) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        const bool numeric =
            res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
        out += " " + (numeric ? format_double(v) : tok);
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::array<char, 17> buf{};
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xf];
    h >>= 4;
  }
  return std::string(buf.data(), 16);
}

inline Domain domain_from_config(const ConfigFile& cfg) {
  const std::string kind = cfg.get("domain", "kind");
  auto vec_of = [](const std::vector<double>& v) {
    if (v.size() == 2) return Vec(v[0], v[1]);
    if (v.size() == 3) return Vec(v[0], v[1], v[2]);
    throw config_error("domain: center needs 2 or 3 coordinates");
  };
  if (kind == "interval")
    return Domain::interval(cfg.get_num("domain", "lo"),
                            cfg.get_num("domain", "hi"));
  if (kind == "interval_union") {
    std::vector<Interval1D> ivs;
    for (const auto& part :
         detail::split(cfg.get("domain", "intervals"), ';')) {
      const auto nums = detail::parse_numbers(part);
      if (nums.size() != 2)
        throw config_error("domain: each interval is 'lo hi'");
      ivs.push_back({nums[0], nums[1]});
    }
    return Domain::interval_union(ivs);
  }
  if (kind == "ball")
    return Domain::ball(vec_of(detail::parse_numbers(cfg.get("domain", "center"))),
                        cfg.get_num("domain", "radius"));
  if (kind == "annulus")
    return Domain::annulus(
        vec_of(detail::parse_numbers(cfg.get("domain", "center"))),
        cfg.get_num("domain", "r_in"), cfg.get_num("domain", "r_out"));
  if (kind == "ball_union") {
    std::vector<BallShape> balls;
    for (const auto& part : detail::split(cfg.get("domain", "balls"), ';')) {
      const auto nums = detail::parse_numbers(part);
      if (nums.size() != 3 && nums.size() != 4)
        throw config_error("domain: each ball is 'cx cy [cz] radius'");
      BallShape b;
      b.radius = nums.back();
      b.center = nums.size() == 3 ? Vec(nums[0], nums[1])
                                  : Vec(nums[0], nums[1], nums[2]);
      balls.push_back(b);
    }
    return Domain::ball_union(balls);
  }
  throw config_error("domain: unknown kind '" + kind + "'");
}

inline ProcessSpec process_from_config(const ConfigFile& cfg) {
  ProcessSpec spec;
  spec.d = static_cast<int>(cfg.get_num("process", "d"));
  spec.alpha = cfg.get_num("process", "alpha");
  spec.a = cfg.get_num("process", "a");
  const std::string variant = cfg.get_or("process", "variant", "plain");
  if (variant == "plain") {
    spec.variant = Variant::plain;
  } else if (variant == "truncated") {
    spec.variant = Variant::truncated;
    spec.trunc_lambda = cfg.get_num("process", "trunc_lambda");
  } else if (variant == "relativistic") {
    spec.variant = Variant::relativistic;
    spec.mass = cfg.get_num("process", "mass");
  } else {
    throw config_error("process: unknown variant '" + variant + "'");
  }
  spec.validate();
  return spec;
}

inline ExperimentConfig experiment_from_config(const ConfigFile& cfg) {
  ExperimentConfig ex;
  ex.spec = process_from_config(cfg);
  ex.domain = domain_from_config(cfg);
  if (ex.domain.dim() != ex.spec.d)
    throw config_error("config: process d and domain dimension disagree");
  ex.grid_points = static_cast<int>(cfg.get_num_or("grid", "points", 3));
  ex.n_paths = static_cast<long>(cfg.get_num_or("grid", "n_paths", 2000));
  ex.seed = static_cast<std::uint64_t>(cfg.get_num_or("grid", "seed", 1));
  ex.scheme.base_step = cfg.get_num_or("scheme", "base_step", 1e-3);
  ex.scheme.boundary_refine_factor =
      cfg.get_num_or("scheme", "boundary_refine_factor", 0.5);
  ex.scheme.bridge_correction =
      cfg.get_num_or("scheme", "bridge_correction", 1) != 0.0;
  ex.scheme.jump_cutoff_eps = cfg.get_num_or("scheme", "jump_cutoff_eps", 0.0);
  ex.scheme.max_steps =
      static_cast<long>(cfg.get_num_or("scheme", "max_steps", 2e7));
  auto probe = [&](const char* key, Vec fallback) {
    if (!cfg.has("grid", key)) return fallback;
    const auto nums = detail::parse_numbers(cfg.get("grid", key));
    if (nums.size() == 1) return Vec(nums[0]);
    if (nums.size() == 2) return Vec(nums[0], nums[1]);
    if (nums.size() == 3) return Vec(nums[0], nums[1], nums[2]);
    throw config_error("grid: probe point needs 1-3 coordinates");
  };
  const auto pts = detail::grid_points(ex.domain, std::max(2, ex.grid_points));
  ex.x = probe("x", pts.front());
  ex.y = probe("y", pts.back());
  if (cfg.sections.count("tolerances"))
    for (const auto& [key, val] : cfg.sections.at("tolerances"))
      ex.tolerances[key] = parse_double(val);
  ex.validate();
  return ex;
}

// Minimal SVG scatter plot with an optional horizontal reference band.
inline std::string svg_scatter(const std::vector<double>& xs,
                               const std::vector<double>& ys,
                               const std::string& title, double band_lo = 0.0,
                               double band_hi = 0.0) {
  const int W = 480, H = 320, M = 48;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!xs.empty()) {
    xmin = *std::min_element(xs.begin(), xs.end());
    xmax = *std::max_element(xs.begin(), xs.end());
    ymin = *std::min_element(ys.begin(), ys.end());
    ymax = *std::max_element(ys.begin(), ys.end());
  }
  if (band_hi > band_lo) {
    ymin = std::min(ymin, band_lo);
    ymax = std::max(ymax, band_hi);
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto px = [&](double x) {
    return M + (W - 2 * M) * (x - xmin) / (xmax - xmin);
  };
  auto py = [&](double y) {
    return H - M - (H - 2 * M) * (y - ymin) / (ymax - ymin);
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
      << "</text>\n";
  if (band_hi > band_lo)
    out << "<rect x=\"" << M << "\" y=\"" << py(band_hi) << "\" width=\""
        << W - 2 * M << "\" height=\"" << py(band_lo) - py(band_hi)
        << "\" fill=\"#cce5ff\"/>\n";
  out << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M
      << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M
      << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << M << "\" y=\"" << H - M + 16 << "\">"
      << format_double(xmin) << "</text>\n";
  out << "<text x=\"" << W - M << "\" y=\"" << H - M + 16
      << "\" text-anchor=\"end\">" << format_double(xmax) << "</text>\n";
  out << "<text x=\"" << M - 4 << "\" y=\"" << H - M
      << "\" text-anchor=\"end\">" << format_double(ymin) << "</text>\n";
  out << "<text x=\"" << M - 4 << "\" y=\"" << M + 4
      << "\" text-anchor=\"end\">" << format_double(ymax) << "</text>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
        << "\" r=\"3\" fill=\"#1f4e79\"/>\n";
  out << "</svg>\n";
  return out.str();
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string serialize() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return out.str();
  }

  static CsvTable parse(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = detail::split(line, ',');
      if (first) {
        t.header = cells;
        first = false;
      } else {
        if (cells.size() != t.header.size())
          throw config_error("csv row width does not match header");
        t.rows.push_back(cells);
      }
    }
    return t;
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  out << content;
}

}  // namespace greenlab
