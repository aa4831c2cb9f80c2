#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "horn/runtime.hpp"
#include "horn/writer.hpp"

namespace horn::testing {

/// A runtime whose diagnostics and output are captured instead of printed.
class QuietRuntime {
 public:
  explicit QuietRuntime(std::string_view program = {}, bool prelude = true) : rt(options(prelude)) {
    if (!program.empty()) rt.consult(program, "test");
  }

  std::vector<std::string> diagnostics;
  std::string output;
  Runtime rt;

 private:
  Runtime::Options options(bool prelude) {
    Runtime::Options o;
    o.load_prelude = prelude;
    o.diagnostics = [this](std::string_view line) { diagnostics.emplace_back(line); };
    o.output = [this](std::string_view text) { output.append(text); };
    return o;
  }
};

/// Every answer of an engine, written out; stops after `limit`.
inline std::vector<std::string> stream(Runtime& rt, std::string_view pattern, std::string_view goal,
                                       size_t limit = 100000) {
  Engine e = rt.new_engine(pattern, goal);
  std::vector<std::string> out;
  while (out.size() < limit) {
    Answer a = e.get();
    if (!a) break;
    out.push_back(write_term(a.value()));
  }
  return out;
}

/// Answers to a query in the toplevel's `Name=Value, ...` form.
inline std::vector<std::string> solve(Runtime& rt, std::string_view query, size_t limit = 100000) {
  ParsedTerm q = rt.parse(query);
  std::vector<Term> names, values;
  for (auto& [name, var] : q.variables) {
    names.push_back(Term::atom(name));
    values.push_back(var);
  }
  Engine e = rt.new_engine(Term::list(values), q.term);
  std::vector<std::string> out;
  while (out.size() < limit) {
    Answer a = e.get();
    if (!a) break;
    std::string line;
    const Term* l = &a.value().deref();
    for (const Term& name : names) {
      if (!line.empty()) line += ", ";
      line += std::string(name.symbol().text()) + "=" + write_term(l->arg(0));
      l = &l->arg(1).deref();
    }
    out.push_back(line.empty() ? "yes" : line);
  }
  return out;
}

/// Renames `_G<n>` variables in written terms to _V0, _V1, ... in order of
/// appearance, so variants compare equal.
inline std::string canonical(const std::string& written) {
  static const std::regex var_name("_G[0-9]+");
  std::unordered_map<std::string, std::string> names;
  std::string out;
  auto begin = std::sregex_iterator(written.begin(), written.end(), var_name);
  size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.append(written, last, static_cast<size_t>(it->position()) - last);
    auto [slot, fresh] = names.try_emplace(it->str(), "_V" + std::to_string(names.size()));
    out += slot->second;
    last = static_cast<size_t>(it->position() + it->length());
  }
  out.append(written, last);
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

/// Partitions of n counted by brute force: every composition (one per bit
/// pattern of n-1 cut points) is sorted and deduplicated.
inline size_t partitions_brute(int n) {
  std::set<std::vector<int>> seen;
  for (uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<int> parts;
    int run = 1;
    for (int i = 0; i < n - 1; ++i) {
      if (cuts & (1u << i)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    std::sort(parts.begin(), parts.end());
    seen.insert(parts);
  }
  return seen.size();
}

/// First `count` primes by trial division.
inline std::vector<int64_t> primes_trial(size_t count) {
  std::vector<int64_t> out;
  for (int64_t n = 2; out.size() < count; ++n) {
    bool prime = true;
    for (int64_t d = 2; d < n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(n);
  }
  return out;
}

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random integer list text such as "[3,-1,4]".
inline std::string random_list(Rng& rng, std::vector<int64_t>* values = nullptr, int max_len = 6) {
  std::string s = "[";
  const int n = pick(rng, 0, max_len);
  for (int i = 0; i < n; ++i) {
    const int v = pick(rng, -20, 20);
    if (values) values->push_back(v);
    if (i) s += ",";
    s += std::to_string(v);
  }
  return s + "]";
}

}  // namespace horn::testing
