// Independent reference implementations and generators used by the unit
// and acceptance tests. Nothing here calls into the code under test except
// to build inputs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dsl/model.hpp"
#include "kb/knowledge_base.hpp"

namespace oracle {

// ---------------------------------------------------------------- formulas

inline double energy_formula(double load) { return (load - 0.2) / (5.0 - 0.2); }

// ---------------------------------------------------------------- planning

struct Candidate {
  std::string id;
  std::map<std::string, double> expected;
  bool blacklisted = false;
};

struct Nfr {
  std::string type;
  bool higher_is_better = true;
  double threshold = 0.0;
};

/// Brute force: filter by every NFR, drop the excluded id, maximize the sum
/// of margins, break ties by the lexicographically smallest id.
inline std::optional<std::string> best_design(const std::vector<Candidate>& candidates, const std::vector<Nfr>& nfrs,
                                              const std::optional<std::string>& excluded) {
  std::optional<std::string> best;
  double best_score = 0.0;
  for (const auto& c : candidates) {
    if (c.blacklisted || (excluded && c.id == *excluded)) continue;
    bool ok = true;
    double score = 0.0;
    for (const auto& n : nfrs) {
      auto it = c.expected.find(n.type);
      if (it == c.expected.end()) {
        ok = false;
        break;
      }
      const double m = n.higher_is_better ? it->second - n.threshold : n.threshold - it->second;
      if (m < 0.0) {
        ok = false;
        break;
      }
      score += m;
    }
    if (!ok) continue;
    if (!best || score > best_score || (score == best_score && c.id < *best)) {
      best = c.id;
      best_score = score;
    }
  }
  return best;
}

/// A random planning problem: up to `max_designs` designs over up to
/// `max_types` QA types, values on a coarse grid so ties and boundary
/// equalities actually occur.
struct PlanningCase {
  std::vector<std::pair<std::string, bool>> types;  // id, higher_is_better
  std::vector<Candidate> designs;
  std::vector<Nfr> nfrs;
  std::optional<std::string> grounded;
};

inline PlanningCase random_planning_case(std::mt19937_64& rng, int max_designs = 27, int max_types = 3) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto grid = [&] { return pick(0, 20) / 20.0; };
  PlanningCase pc;
  const int ntypes = pick(1, max_types);
  for (int i = 0; i < ntypes; ++i) pc.types.push_back({"q" + std::to_string(i), pick(0, 1) == 1});
  const int ndesigns = pick(1, max_designs);
  std::vector<int> order(ndesigns);
  for (int i = 0; i < ndesigns; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);  // insertion order differs from id order
  for (int i : order) {
    Candidate c;
    c.id = "fd" + std::to_string(i);
    for (const auto& [t, hib] : pc.types)
      if (pick(0, 9) > 0) c.expected[t] = grid();
    c.blacklisted = pick(0, 9) == 0;
    pc.designs.push_back(std::move(c));
  }
  for (const auto& [t, hib] : pc.types)
    if (pick(0, 3) > 0) pc.nfrs.push_back({t, hib, grid()});
  if (pick(0, 1) == 1) pc.grounded = pc.designs[pick(0, ndesigns - 1)].id;
  return pc;
}

inline mros::kb::KnowledgeBase build_kb(const PlanningCase& pc) {
  using namespace mros::kb;
  KnowledgeBase kb;
  for (const auto& [t, hib] : pc.types)
    kb.insert(QualityAttributeType{t, hib ? Polarity::HigherIsBetter : Polarity::LowerIsBetter, {}});
  kb.insert(Function{"f", {}});
  for (const auto& c : pc.designs) {
    FunctionDesign fd{c.id, "f", {}, c.id, false};
    for (const auto& [t, v] : c.expected) fd.expected_qas.push_back({t, v});
    kb.insert(fd);
    if (c.blacklisted) kb.blacklist(c.id);
  }
  Objective o{"o", "f", {}, ObjectiveStatus::Ungrounded};
  for (const auto& n : pc.nfrs) o.nfrs.push_back({n.type, n.threshold});
  kb.insert(o);
  return kb;
}

// ---------------------------------------------------------------- documents

/// Random valid model document: declarations only reference earlier ones,
/// comparators follow polarity, numbers are arbitrary finite doubles.
inline mros::dsl::ModelDocument random_document(std::mt19937_64& rng) {
  using namespace mros::dsl;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto number = [&]() -> double {
    switch (pick(0, 3)) {
      case 0: return pick(-5, 5);
      case 1: return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      case 2: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
      default: return std::ldexp(std::uniform_real_distribution<double>(0.5, 1.0)(rng), pick(-60, 60));
    }
  };
  ModelDocument doc;
  std::vector<std::pair<std::string, bool>> types;
  std::vector<std::string> functions;
  int serial = 0;
  const int n = pick(0, 14);
  for (int i = 0; i < n; ++i) {
    const int kind = types.empty() ? pick(0, 1) : functions.empty() ? pick(0, 1) : pick(0, 3);
    const std::string id = "id_" + std::to_string(serial++) + (pick(0, 1) ? "x" : "");
    switch (kind) {
      case 0: {
        const bool hib = pick(0, 1) == 1;
        types.push_back({id, hib});
        doc.declarations.push_back(
            {QATypeDecl{id, hib ? mros::kb::Polarity::HigherIsBetter : mros::kb::Polarity::LowerIsBetter}, {}});
        break;
      }
      case 1:
        functions.push_back(id);
        doc.declarations.push_back({FunctionDecl{id}, {}});
        break;
      case 2: {
        DesignDecl d{id, functions[pick(0, static_cast<int>(functions.size()) - 1)], {}, "cfg " + id};
        for (const auto& [t, hib] : types)
          if (pick(0, 2) > 0) d.qas.push_back({t, number()});
        if (pick(0, 3) == 0) d.config = "quote\" back\\slash #hash";
        doc.declarations.push_back({d, {}});
        break;
      }
      default: {
        ObjectiveDecl o{id, functions[pick(0, static_cast<int>(functions.size()) - 1)], {}};
        for (const auto& [t, hib] : types)
          if (pick(0, 1) > 0) o.requirements.push_back({t, hib ? Comparator::AtLeast : Comparator::AtMost, number()});
        doc.declarations.push_back({o, {}});
        break;
      }
    }
  }
  return doc;
}

/// Printable ASCII plus tab: the replacement alphabet for mutations. Line
/// breaks are never inserted, so the mutated line keeps its number.
inline std::string mutation_alphabet() {
  std::string a = "\t";
  for (char c = 0x20; c < 0x7f; ++c) a.push_back(c);
  return a;
}

/// 1-based line number of byte `pos`.
inline int line_of(const std::string& text, std::size_t pos) {
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// ---------------------------------------------------------------- traces

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

/// Reader for the unquoted numeric/identifier CSVs the harness writes.
inline CsvTable read_simple_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (first) t.header = fields;
    else t.rows.push_back(fields);
    first = false;
  }
  return t;
}

/// Violation fraction over rows with a value in `column`.
inline double violation_fraction(const CsvTable& t, const std::string& column, bool higher_is_better,
                                 double threshold) {
  const int c = t.column(column);
  long n = 0, bad = 0;
  for (const auto& r : t.rows) {
    if (c < 0 || r[c].empty()) continue;
    ++n;
    const double v = std::stod(r[c]);
    if (higher_is_better ? v < threshold : v > threshold) ++bad;
  }
  return n ? static_cast<double>(bad) / n : 0.0;
}

}  // namespace oracle
