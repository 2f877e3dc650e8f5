#pragma once

// Text format: '#' header lines of key=value pairs, then one "x<TAB>u" row per node.
// Recognized keys: p, alpha, theta, tail (zero|power), tail_c, tail_s, head (constant|log), head_c.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wtm/errors.hpp"
#include "wtm/radial_profile.hpp"

namespace wtm {

struct ProfileFile {
  RadialProfile profile;
  std::map<std::string, std::string> meta;

  std::optional<double> number(const std::string& key) const {
    const auto it = meta.find(key);
    if (it == meta.end()) return std::nullopt;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      detail::require(used == it->second.size(), "profile header: bad number for " + key);
      return v;
    } catch (const std::logic_error&) {
      throw ValidationError("profile header: bad number for " + key);
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("profile line " + std::to_string(line) + ": not a number: '" + token + "'");
  }
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

inline ProfileFile parse_profile(std::istream& in) {
  ProfileFile out;
  std::vector<double> x;
  std::vector<double> u;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      std::istringstream fields(s.substr(1));
      std::string kv;
      while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) continue;
        out.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      continue;
    }
    std::istringstream row(s);
    std::string a;
    std::string b;
    std::string extra;
    if (!(row >> a >> b) || (row >> extra))
      throw ValidationError("profile line " + std::to_string(line) + ": expected two columns");
    x.push_back(detail::parse_number(a, line));
    u.push_back(detail::parse_number(b, line));
  }

  TailModel tail = ZeroTail{};
  const auto tail_kind = out.meta.count("tail") ? out.meta.at("tail") : std::string("zero");
  if (tail_kind == "power") {
    const auto s = out.number("tail_s");
    detail::require(s.has_value(), "profile header: power tail needs tail_s");
    double c = 0.0;
    if (const auto given = out.number("tail_c")) {
      c = *given;
    } else if (!x.empty()) {
      c = u.back() * std::pow(x.back(), *s);
    }
    tail = PowerDecay{c, *s};
  } else {
    detail::require(tail_kind == "zero", "profile header: unknown tail model '" + tail_kind + "'");
  }

  HeadModel head = ConstantHead{};
  const auto head_kind = out.meta.count("head") ? out.meta.at("head") : std::string("constant");
  if (head_kind == "log") {
    const auto c = out.number("head_c");
    detail::require(c.has_value(), "profile header: log head needs head_c");
    head = LogGrowth{*c};
  } else {
    detail::require(head_kind == "constant", "profile header: unknown head model '" + head_kind + "'");
  }

  out.profile = x.empty() ? RadialProfile{} : RadialProfile(std::move(x), std::move(u), tail, head);
  return out;
}

inline ProfileFile read_profile(const std::string& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), "cannot open profile file '" + path + "'");
  return parse_profile(in);
}

inline void write_profile(std::ostream& out, const RadialProfile& u,
                          const std::map<std::string, std::string>& meta = {}) {
  std::map<std::string, std::string> m = meta;
  if (const auto* pd = std::get_if<PowerDecay>(&u.tail())) {
    m["tail"] = "power";
    m["tail_c"] = detail::format_double(pd->c);
    m["tail_s"] = detail::format_double(pd->s);
  } else {
    m["tail"] = "zero";
  }
  if (const auto* lg = std::get_if<LogGrowth>(&u.head())) {
    m["head"] = "log";
    m["head_c"] = detail::format_double(lg->c);
  }
  for (const auto& [k, v] : m) out << "# " << k << '=' << v << '\n';
  const auto x = u.nodes();
  const auto v = u.values();
  for (std::size_t i = 0; i < x.size(); ++i)
    out << detail::format_double(x[i]) << '\t' << detail::format_double(v[i]) << '\n';
}

inline void write_profile(const std::string& path, const RadialProfile& u,
                          const std::map<std::string, std::string>& meta = {}) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write profile file '" + path + "'");
  write_profile(out, u, meta);
}

} // namespace wtm
