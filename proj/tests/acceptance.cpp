// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "horn/runtime.hpp"
#include "horn/writer.hpp"
#include "support.hpp"

using namespace horn;
using namespace horn::testing;
using Clock = std::chrono::steady_clock;
using V = std::vector<std::string>;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string strip_spaces(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

std::string join(const V& items, const char* sep = ",") {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

int failures = 0;

void report(int n, const char* title, const std::function<Outcome()>& check) {
  Outcome o;
  const auto start = Clock::now();
  try {
    o = check();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3fs", seconds_since(start));
  std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << n << ": " << title << " [" << timing << "]";
  if (!o.detail.empty()) std::cout << " -- " << o.detail;
  std::cout << std::endl;
  if (!o.ok) ++failures;
}

// Engine handle text for use inside query strings.
std::string handle_text(const Engine& e) { return write_term(e.handle()); }

long status_kb(const char* field) {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(field, 0) == 0) return std::stol(line.substr(std::strlen(field)));
  return -1;
}

}  // namespace

int main() {
  report(1, "inc_test yields R1=the(0=>2), R2=the(2=>7) in under 1s", [] {
    Outcome o;
    const auto start = Clock::now();
    QuietRuntime q;
    V got = solve(q.rt, "inc_test(R1,R2)");
    const double t = seconds_since(start);
    o.expect(got.size() == 1 && strip_spaces(got[0]) == "R1=the(0=>2),R2=the(2=>7)", "got " + join(got, " | "));
    o.expect(t < 1.0, "took " + std::to_string(t) + "s");
    return o;
  });

  report(2, "best_of with > gives 4, with < gives 1, each in under 1s", [] {
    Outcome o;
    QuietRuntime q;
    for (auto [cmp, want] : {std::pair{">", "X=4"}, std::pair{"<", "X=1"}}) {
      const auto start = Clock::now();
      V got = solve(q.rt, std::string("best_of(X,") + cmp + ",member(X,[2,1,4,3]))");
      const double t = seconds_since(start);
      o.expect(got == V{want}, std::string(cmp) + ": got " + join(got, " | "));
      o.expect(t < 1.0, "took " + std::to_string(t) + "s");
    }
    return o;
  });

  report(3, "answer protocol: the(1), the(2), no, no, no; 100 random lists", [] {
    Outcome o;
    QuietRuntime q;
    auto protocol = [&](const std::string& list, const std::vector<int64_t>& values) {
      Engine e = q.rt.new_engine("X", "member(X," + list + ")");
      V got, want;
      for (int64_t v : values) want.push_back("the(" + std::to_string(v) + ")");
      for (int i = 0; i < 3; ++i) want.push_back("no");
      for (size_t i = 0; i < want.size(); ++i) got.push_back(write_term(e.get().to_term()));
      o.expect(got == want, list + ": got " + join(got));
    };
    protocol("[1,2]", {1, 2});
    Rng rng(101);
    for (int i = 0; i < 100; ++i) {
      std::vector<int64_t> values;
      const std::string list = random_list(rng, &values, 8);
      protocol(list, values);
    }
    return o;
  });

  report(4, "dynamic database: test_clause order; 1000+ random ops match a list model", [] {
    Outcome o;
    QuietRuntime q;
    V order = solve(q.rt, "test_clause(H,B)");
    o.expect(order.size() == 3, "test_clause gave " + std::to_string(order.size()) + " answers");
    if (order.size() == 3) {
      o.expect(order[0] == "H=a(1), B=true", order[0]);
      o.expect(order[1] == "H=a(2), B=true", order[1]);
      o.expect(canonical(order[2]) == "H=b(_V0), B=a(_V0)", order[2]);
    }

    // model: ordered (key, body) pairs; clauses are k(Key):-b(Body)
    Engine db = q.rt.new_engine("done", "queue_server");
    const std::string d = handle_text(db);
    std::vector<std::pair<int, int>> model;
    Rng rng(404);
    int ops = 0;
    for (; ops < 1200 && o.ok; ++ops) {
      const int key = pick(rng, 0, 5), body = pick(rng, 0, 99);
      const std::string clause = "(k(" + std::to_string(key) + "):-b(" + std::to_string(body) + "))";
      switch (pick(rng, 0, 3)) {
        case 0:
          o.expect(solve(q.rt, "edb_assertz(" + d + "," + clause + ")") == V{"yes"}, "assertz failed");
          model.emplace_back(key, body);
          break;
        case 1:
          o.expect(solve(q.rt, "edb_asserta(" + d + "," + clause + ")") == V{"yes"}, "asserta failed");
          model.insert(model.begin(), {key, body});
          break;
        case 2: {
          auto it = std::find_if(model.begin(), model.end(), [&](auto& c) { return c.first == key; });
          V got = solve(q.rt, "edb_retract1(" + d + ",k(" + std::to_string(key) + "))");
          o.expect(got.size() == (it != model.end() ? 1u : 0u), "retract1 k(" + std::to_string(key) + ") mismatch");
          if (it != model.end()) model.erase(it);
          break;
        }
        default: {
          V want;
          for (auto& [k, b] : model) want.push_back(std::to_string(k) + "-" + std::to_string(b));
          V got = solve(q.rt, "edb_clause(" + d + ",k(K),b(B))");
          V pairs;
          for (auto& line : solve(q.rt, "findall(K-B,edb_clause(" + d + ",k(K),b(B)),L)"))
            pairs.push_back(line.substr(line.find("L=[") + 3, line.size() - line.find("L=[") - 4));
          o.expect(pairs.size() == 1 && pairs[0] == join(want), "clause dump differs after op " + std::to_string(ops));
          o.expect(got.size() == model.size(), "edb_clause answer count differs");
          break;
        }
      }
    }
    o.detail = o.ok ? std::to_string(ops) + " ops, final size " + std::to_string(model.size()) : o.detail;
    return o;
  });

  report(5, "count_partitions(N) equals brute force for N in 1..12; N=12 under 5s", [] {
    Outcome o;
    QuietRuntime q;
    for (int n = 1; n <= 12; ++n) {
      const auto start = Clock::now();
      V got = solve(q.rt, "count_partitions(" + std::to_string(n) + ",R)");
      const double t = seconds_since(start);
      const std::string want = "R=" + std::to_string(partitions_brute(n));
      o.expect(got == V{want}, "N=" + std::to_string(n) + ": got " + join(got) + ", oracle " + want);
      if (n == 12) o.expect(t < 5.0, "N=12 took " + std::to_string(t) + "s");
    }
    return o;
  });

  report(6, "first 1000 primes match trial division; memory steady from 10th to 1000th", [] {
    Outcome o;
    {
      QuietRuntime q;
      V got = stream(q.rt, "P", "prime(P)", 1000);
      auto oracle = primes_trial(1000);
      o.expect(got.size() == 1000, "only " + std::to_string(got.size()) + " primes");
      for (size_t i = 0; i < got.size() && o.ok; ++i)
        o.expect(got[i] == std::to_string(oracle[i]), "prime #" + std::to_string(i + 1) + " is " + got[i]);
    }
    // measure in a fresh process so earlier work does not pollute the peak
    int fds[2];
    if (pipe(fds) != 0) {
      o.fail("pipe failed");
      return o;
    }
    const pid_t pid = fork();
    if (pid == 0) {
      close(fds[0]);
      long at10 = -1, at1000 = -1, rss10 = -1, rss1000 = -1;
      {
        QuietRuntime q;
        Engine e = q.rt.new_engine("P", "prime(P)");
        for (int i = 1; i <= 1000; ++i) {
          e.get();
          if (i == 10) {
            at10 = status_kb("VmHWM:");
            rss10 = status_kb("VmRSS:");
          }
        }
        at1000 = status_kb("VmHWM:");
        rss1000 = status_kb("VmRSS:");
      }
      char buf[128];
      const int n = std::snprintf(buf, sizeof buf, "%ld %ld %ld %ld", at10, at1000, rss10, rss1000);
      (void)!write(fds[1], buf, static_cast<size_t>(n));
      _exit(0);
    }
    close(fds[1]);
    char buf[128] = {};
    (void)!read(fds[0], buf, sizeof buf - 1);
    close(fds[0]);
    waitpid(pid, nullptr, 0);
    long hwm10 = 0, hwm1000 = 0, rss10 = 0, rss1000 = 0;
    std::istringstream(buf) >> hwm10 >> hwm1000 >> rss10 >> rss1000;
    o.expect(hwm10 > 0 && hwm1000 > 0, "could not read /proc/self/status");
    o.expect(hwm1000 <= 2 * hwm10, "peak grew from " + std::to_string(hwm10) + " kB to " + std::to_string(hwm1000) + " kB");
    if (o.ok)
      o.detail = "peak " + std::to_string(hwm10) + " kB after 10th, " + std::to_string(hwm1000) + " kB after 1000th";
    return o;
  });

  report(7, "findall equals exhaustive enumeration and efoldl(cons) equals fold over findall (200 generators)", [] {
    Outcome o;
    QuietRuntime q;
    Rng rng(707);
    for (int i = 0; i < 200 && o.ok; ++i) {
      std::string gen;
      switch (pick(rng, 0, 3)) {
        case 0:
          gen = "member(X," + random_list(rng) + ")";
          break;
        case 1: {
          const int lo = pick(rng, -3, 5);
          gen = "between(" + std::to_string(lo) + "," + std::to_string(lo + pick(rng, -1, 6)) + ",X)";
          break;
        }
        case 2:
          gen = "append(X,_," + random_list(rng) + ")";
          break;
        default:
          gen = "(member(A," + random_list(rng, nullptr, 3) + "),member(B," + random_list(rng, nullptr, 3) +
                "),X=A-B)";
          break;
      }
      const V reference = stream(q.rt, "X", gen);
      const std::string listed = "[" + join(reference) + "]";
      V reversed(reference.rbegin(), reference.rend());
      const std::string folded = "[" + join(reversed) + "]";
      V got = solve(q.rt, "findall(X," + gen + ",L),new_engine(X," + gen + ",E),efoldl(E,reverse_cons,[],R)");
      o.expect(got.size() == 1, gen + ": no answer");
      if (!o.ok) break;
      const std::string& line = got[0];
      o.expect(line.find("L=" + listed) != std::string::npos, gen + ": findall gave " + line);
      o.expect(line.ends_with("R=" + folded), gen + ": efoldl gave " + line);
    }
    return o;
  });

  report(8, "if_any answer multisets match the clause analysis on 20 triples", [] {
    Outcome o;
    QuietRuntime q;
    struct Then {
      std::string code;
      std::function<std::vector<int>(int)> answers;
    };
    struct Else {
      std::string code;
      std::vector<int> answers;
    };
    const std::vector<Then> thens = {
        {"Y is X*3", [](int x) { return std::vector<int>{x * 3}; }},
        {"member(Y,[X,9])", [](int x) { return std::vector<int>{x, 9}; }},
        {"fail", [](int) { return std::vector<int>{}; }},
        {"(X>2,Y=X)", [](int x) { return x > 2 ? std::vector<int>{x} : std::vector<int>{}; }},
    };
    const std::vector<Else> elses = {{"Y=0", {0}}, {"member(Y,[7,8])", {7, 8}}, {"fail", {}}};
    const std::vector<std::vector<int>> conds = {{}, {1}, {1, 2, 3}, {4, 2}, {}};
    int triples = 0;
    for (size_t c = 0; c < conds.size(); ++c) {
      for (size_t t = 0; t < thens.size(); ++t) {
        const Else& e = elses[(c + t) % elses.size()];
        std::vector<int> want;
        if (conds[c].empty()) {
          want = e.answers;
        } else {
          for (int x : conds[c])
            for (int y : thens[t].answers(x)) want.push_back(y);
        }
        std::string list = "[";
        for (size_t i = 0; i < conds[c].size(); ++i) list += (i ? "," : "") + std::to_string(conds[c][i]);
        list += "]";
        const std::string cond = conds[c].empty() && c == 0 ? "fail" : "member(X," + list + ")";
        V got = stream(q.rt, "Y", "if_any(" + cond + "," + thens[t].code + "," + e.code + ")");
        std::vector<int> got_values;
        for (auto& s : got) got_values.push_back(std::stoi(s));
        std::sort(want.begin(), want.end());
        std::sort(got_values.begin(), got_values.end());
        o.expect(got_values == want, "if_any(" + cond + "," + thens[t].code + "," + e.code + ") gave [" + join(got) + "]");
        ++triples;
      }
    }
    o.expect(triples == 20, "ran " + std::to_string(triples) + " triples");
    return o;
  });

  report(9, "hub: 2 producers x 10, 4 consumers, 100 repetitions; 10ms timeout within [10,100]ms", [] {
    Outcome o;
    QuietRuntime q;
    for (int rep = 0; rep < 100 && o.ok; ++rep) {
      HubRef work = q.rt.hub_ms(0);
      HubRef results = q.rt.hub_ms(0);
      const std::string w = write_term(work.handle()), r = write_term(results.handle());
      std::vector<size_t> started;
      for (int c = 0; c < 4; ++c)
        started.push_back(solve(q.rt, "bg((between(1,5,_),collect(" + w + ",X),put(" + r + ",X),fail))").size());
      for (int p = 0; p < 2; ++p)
        started.push_back(solve(q.rt, "bg((between(1,10,I),put(" + w + ",p(" + std::to_string(p) + ",I)),fail))").size());
      o.expect(std::all_of(started.begin(), started.end(), [](size_t n) { return n == 1; }), "bg failed to start");
      V collected;
      for (int i = 0; i < 20; ++i) {
        auto t = results.hub->collect();
        if (!t) break;
        collected.push_back(write_term(*t));
      }
      V expected;
      for (int p = 0; p < 2; ++p)
        for (int i = 1; i <= 10; ++i) expected.push_back("p(" + std::to_string(p) + "," + std::to_string(i) + ")");
      std::sort(collected.begin(), collected.end());
      std::sort(expected.begin(), expected.end());
      o.expect(collected == expected, "rep " + std::to_string(rep) + ": collected " + join(collected));
      o.expect(work.hub->size() == 0 && results.hub->size() == 0, "terms left over in rep " + std::to_string(rep));
    }
    HubRef slow = q.rt.hub_ms(10);
    const auto start = Clock::now();
    const bool got = slow.hub->collect().has_value();
    const double ms = seconds_since(start) * 1000;
    o.expect(!got, "collect on an empty hub succeeded");
    o.expect(ms >= 10 && ms <= 100, "timeout took " + std::to_string(ms) + "ms");
    o.expect(solve(q.rt, "hub_ms(10,H),collect(H,_)").empty(), "object-level collect did not fail");
    if (o.ok) o.detail = "empty collect returned after " + std::to_string(ms) + "ms";
    return o;
  });

  report(10, "catch/throw: caught, rethrown to outer, answers passed through", [] {
    Outcome o;
    QuietRuntime q;
    V caught = solve(q.rt, "catch(throw(boom),boom,R=caught)");
    o.expect(caught == V{"R=caught"}, "caught: " + join(caught, " | "));
    V through = solve(q.rt, "catch(member(X,[1,2]),_,fail)");
    o.expect(through == V{"X=1", "X=2"}, "pass-through: " + join(through, " | "));
    V outer = solve(q.rt, "catch(catch(throw(other),boom,R=inner),other,R=outer)");
    o.expect(outer == V{"R=outer"}, "rethrow: " + join(outer, " | "));
    V top = stream(q.rt, "_", "catch(throw(other),boom,_)", 1);
    o.expect(top == V{"exception(other)"}, "uncaught: " + join(top, " | "));
    V bound = solve(q.rt, "catch((member(X,[1,2,3]),X>1,throw(found(X))),found(Y),true)");
    o.expect(bound.size() == 1 && bound[0].ends_with("Y=2"), "payload: " + join(bound, " | "));
    return o;
  });

  report(11, "isolation: interleaved gets reproduce solo streams (100 random pairs)", [] {
    Outcome o;
    QuietRuntime q;
    Rng rng(1111);
    auto random_goal = [&]() -> std::pair<std::string, std::string> {
      switch (pick(rng, 0, 3)) {
        case 0:
          return {"X", "member(X," + random_list(rng) + ")"};
        case 1:
          return {"P", "integer_partition_of(" + std::to_string(pick(rng, 1, 6)) + ",P)"};
        case 2:
          return {"X", "between(1," + std::to_string(pick(rng, 0, 8)) + ",X)"};
        default:
          return {"_", "loop(" + std::to_string(pick(rng, 0, 9)) + ")"};
      }
    };
    constexpr size_t kCap = 12;
    for (int pair = 0; pair < 100 && o.ok; ++pair) {
      auto [pa, ga] = random_goal();
      auto [pb, gb] = random_goal();
      const V solo_a = stream(q.rt, pa, ga, kCap), solo_b = stream(q.rt, pb, gb, kCap);
      Engine a = q.rt.new_engine(pa, ga), b = q.rt.new_engine(pb, gb);
      V got_a, got_b;
      bool done_a = false, done_b = false;
      while (!(done_a && done_b)) {
        const bool pick_a = done_b || (!done_a && pick(rng, 0, 1) == 0);
        Engine& e = pick_a ? a : b;
        V& got = pick_a ? got_a : got_b;
        bool& done = pick_a ? done_a : done_b;
        Answer ans = e.get();
        if (ans) got.push_back(write_term(ans.value()));
        if (!ans || got.size() >= kCap) done = true;
      }
      o.expect(canonical(join(got_a, ";")) == canonical(join(solo_a, ";")), ga + " changed when interleaved");
      o.expect(canonical(join(got_b, ";")) == canonical(join(solo_b, ";")), gb + " changed when interleaved");
    }
    return o;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
