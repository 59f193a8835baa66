#pragma once

#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sprkit/decomp.hpp"
#include "sprkit/evaluate.hpp"
#include "sprkit/general.hpp"
#include "sprkit/minor.hpp"

// JSON and CSV emission. Every JSON document carries "schema_version": 1.
// Wall-clock times are left out unless asked for, so that a fixed seed gives
// byte-identical reports.

namespace sprkit {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct ReportOptions {
  bool include_timing = false;
};

inline json to_json(const TrialReport& t, const ReportOptions& opts = {}) {
  json j;
  j["seed"] = t.seed;
  j["algorithm"] = to_string(t.algorithm);
  j["valid_partition"] = t.valid_partition;
  j["dominated"] = t.dominated;
  j["max_stretch"] = t.max_stretch;
  j["outer_iterations"] = t.outer_iterations;
  j["recursion_depth"] = t.recursion_depth;
  if (opts.include_timing) j["wall_time"] = t.wall_time;
  if (!t.error.empty()) j["error"] = t.error;
  j["stretch"] = t.stretch;
  return j;
}

inline TrialReport trial_from_json(const json& j) {
  TrialReport t;
  t.seed = j.at("seed").get<std::uint64_t>();
  const auto alg = parse_algorithm(j.at("algorithm").get<std::string>());
  if (!alg) throw std::invalid_argument("unknown algorithm tag in report");
  t.algorithm = *alg;
  t.valid_partition = j.at("valid_partition").get<bool>();
  t.dominated = j.at("dominated").get<bool>();
  t.max_stretch = j.at("max_stretch").get<double>();
  t.outer_iterations = j.at("outer_iterations").get<std::size_t>();
  t.recursion_depth = j.value("recursion_depth", std::size_t{0});
  t.wall_time = j.value("wall_time", 0.0);
  t.error = j.value("error", std::string{});
  t.stretch = j.at("stretch").get<std::vector<std::vector<double>>>();
  return t;
}

inline json to_json(const AmplifiedResult& a, const ReportOptions& opts = {}) {
  json j;
  j["best_index"] = a.best_index;
  j["best_max_stretch"] = a.best_max_stretch;
  j["trials"] = json::array();
  for (const auto& t : a.trials) j["trials"].push_back(to_json(t, opts));
  return j;
}

inline AmplifiedResult amplified_from_json(const json& j) {
  AmplifiedResult a;
  a.best_index = j.at("best_index").get<std::size_t>();
  a.best_max_stretch = j.at("best_max_stretch").get<double>();
  for (const auto& t : j.at("trials")) a.trials.push_back(trial_from_json(t));
  return a;
}

inline json to_json(const RecursionLevel& l) {
  json j;
  j["depth"] = l.depth;
  j["vertices"] = l.num_vertices;
  j["terminals"] = l.num_terminals;
  j["scale"] = l.scale;
  j["aspect_ratio"] = l.aspect_ratio;
  j["delegated"] = l.delegated;
  j["fallback"] = l.fallback;
  if (!l.delegated && !l.fallback) {
    j["m0"] = l.m0;
    j["occupied_powers"] = l.occupied_powers;
    j["diameter_bound"] = l.diameter_bound;
    j["claims_hold"] = l.claims_hold();
    j["classes"] = json::array();
    for (const auto& s : l.super_terminals) {
      json c;
      c["terminals"] = s.terminals;
      c["representative"] = s.representative;
      c["ball_size"] = s.ball.size();
      c["diameter"] = s.diameter;
      j["classes"].push_back(std::move(c));
    }
  } else if (l.fallback) {
    j["occupied_powers"] = l.occupied_powers;
  }
  return j;
}

inline json to_json(const TerminalMinor& m, bool with_provenance) {
  json j;
  j["terminals"] = m.terminals;
  j["edges"] = json::array();
  for (const auto& e : m.edges) {
    json je;
    je["a"] = e.a;
    je["b"] = e.b;
    je["weight"] = e.weight;
    if (with_provenance) {
      je["provenance"] = json::array();
      for (const auto& [x, y] : e.provenance) je["provenance"].push_back({x, y});
    }
    j["edges"].push_back(std::move(je));
  }
  return j;
}

inline json to_json(const DecompositionStats& s, const std::vector<RequirementCheck>& checks) {
  json j;
  j["trials"] = s.trials;
  j["delta"] = s.delta;
  j["beta"] = s.beta;
  j["clusters_checked"] = s.clusters_checked;
  j["diameter_violations"] = s.diameter_violations;
  j["max_cluster_diameter"] = s.max_cluster_diameter;
  j["cover_violations"] = s.cover_violations;
  j["requirements"] = json::array();
  for (const auto& c : checks) j["requirements"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["pairs"] = json::array();
  for (const auto& p : s.pairs)
    j["pairs"].push_back({{"x", p.x}, {"y", p.y}, {"distance", p.distance}, {"separated", p.separated},
                          {"frequency", p.frequency}});
  j["paths"] = json::array();
  for (const auto& p : s.paths)
    j["paths"].push_back({{"from", p.from}, {"to", p.to}, {"length", p.length}, {"vertices", p.vertex_count},
                          {"mean", p.mean}, {"stddev", p.stddev}, {"tail", p.tail}});
  j["zp_histogram"] = s.zp_histogram;
  return j;
}

/// Wraps a body under a versioned envelope.
inline json make_document(const std::string& command, json body) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  for (auto& [key, value] : body.items()) doc[key] = std::move(value);
  return doc;
}

namespace csv {

inline std::string number(double x) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return out.str();
}

inline void trials(std::ostream& out, const AmplifiedResult& a, const ReportOptions& opts = {}) {
  out << "trial,seed,algorithm,valid_partition,dominated,max_stretch,outer_iterations,recursion_depth,best";
  if (opts.include_timing) out << ",wall_time";
  out << ",error\n";
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    const auto& t = a.trials[i];
    out << i << ',' << t.seed << ',' << to_string(t.algorithm) << ',' << t.valid_partition << ',' << t.dominated << ','
        << number(t.max_stretch) << ',' << t.outer_iterations << ',' << t.recursion_depth << ','
        << (i == a.best_index);
    if (opts.include_timing) out << ',' << number(t.wall_time);
    out << ',' << '"' << t.error << '"' << '\n';
  }
}

inline void decomposition(std::ostream& out, const DecompositionStats& s, const std::vector<RequirementCheck>& checks) {
  out << "section,name,value,detail\n";
  for (const auto& c : checks) out << "requirement," << c.name << ',' << (c.passed ? "pass" : "fail") << ",\"" << c.detail << "\"\n";
  for (const auto& p : s.pairs)
    out << "pair," << p.x << '-' << p.y << ',' << number(p.frequency) << ",distance=" << number(p.distance) << '\n';
  for (const auto& p : s.paths) {
    out << "path_mean," << p.from << '-' << p.to << ',' << number(p.mean) << ",length=" << number(p.length) << '\n';
    for (std::size_t t = 0; t < p.tail.size(); ++t)
      out << "path_tail," << p.from << '-' << p.to << ',' << number(p.tail[t]) << ",t=" << t << '\n';
  }
  for (std::size_t t = 0; t < s.zp_histogram.size(); ++t)
    out << "zp_histogram," << t << ',' << number(s.zp_histogram[t]) << ",\n";
}

inline void levels(std::ostream& out, const std::vector<RecursionLevel>& levels) {
  out << "depth,vertices,terminals,scale,aspect_ratio,delegated,fallback,m0,classes,claims_hold\n";
  for (const auto& l : levels)
    out << l.depth << ',' << l.num_vertices << ',' << l.num_terminals << ',' << number(l.scale) << ','
        << number(l.aspect_ratio) << ',' << l.delegated << ',' << l.fallback << ',' << l.m0 << ','
        << l.super_terminals.size() << ',' << l.claims_hold() << '\n';
}

}  // namespace csv

}  // namespace sprkit
