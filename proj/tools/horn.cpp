// Command-line front end: interactive queries or a single batch goal.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "horn/prelude.hpp"
#include "horn/reader.hpp"
#include "horn/runtime.hpp"
#include "horn/writer.hpp"

namespace {

using namespace horn;

// Engines for queries answer with '$answer'(['Name'=Value,...]).
Engine start_query(Runtime& rt, std::string_view text) {
  ParsedTerm q = rt.parse(text);
  std::vector<Term> pairs;
  for (auto& [name, var] : q.variables) pairs.push_back(Term::compound(atom::unify, {Term::atom(name), var}));
  Term pattern = Term::compound(atom::answer_tag, {Term::list(pairs)});
  return rt.new_engine(pattern, q.term);
}

// An exception(E) that reached the top is final: the query ends there.
bool is_uncaught(const Term& answer) { return answer.deref().has_functor(atom::exception, 1); }

std::string format_answer(const Term& answer) {
  const Term& a = answer.deref();
  if (!a.has_functor(atom::answer_tag, 1)) return write_term(a);
  std::string out;
  for (const Term* l = &a.arg(0).deref(); l->has_functor(atom::dot, 2); l = &l->arg(1).deref()) {
    const Term& pair = l->arg(0).deref();
    std::string_view name = pair.arg(0).deref().symbol().text();
    if (name.starts_with('_')) continue;
    if (!out.empty()) out += ", ";
    out.append(name).append("=").append(write_term(pair.arg(1)));
  }
  return out.empty() ? "yes" : out;
}

int run_batch(Runtime& rt, const std::string& goal, long limit) {
  Engine e;
  try {
    e = start_query(rt, goal);
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return 2;
  }
  long count = 0;
  while (limit <= 0 || count < limit) {
    Answer a = e.get();
    if (!a) break;
    std::cout << format_answer(a.value()) << "\n";
    if (is_uncaught(a.value())) {
      std::cout.flush();
      return 2;
    }
    ++count;
  }
  std::cout.flush();
  if (e.error()) return 2;
  return count > 0 ? 0 : 1;
}

// Reads lines until a clause end token shows up. False at end of input.
bool read_query(std::string& text) {
  text.clear();
  std::string line;
  std::cout << "?- " << std::flush;
  while (std::getline(std::cin, line)) {
    text += line;
    text += '\n';
    if (has_complete_clause(text)) return true;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      text.clear();
      std::cout << "?- " << std::flush;
    } else {
      std::cout << "|  " << std::flush;
    }
  }
  return !text.empty() && text.find_first_not_of(" \t\r\n") != std::string::npos;
}

int run_repl(Runtime& rt) {
  std::string text;
  while (read_query(text)) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (text.compare(first, 5, "halt.") == 0) break;
    Engine e;
    try {
      e = start_query(rt, text);
    } catch (const std::exception& ex) {
      std::cout << ex.what() << "\n";
      continue;
    }
    for (;;) {
      Answer a = e.get();
      if (!a) {
        std::cout << "no\n";
        break;
      }
      if (is_uncaught(a.value())) {
        std::cout << format_answer(a.value()) << "\n";
        break;
      }
      std::cout << format_answer(a.value()) << " " << std::flush;
      std::string reply;
      if (!std::getline(std::cin, reply)) {
        std::cout << "\n";
        return 0;
      }
      if (reply.find(';') == std::string::npos) break;
    }
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horn: a Horn-clause engine with first-class engines"};
  std::vector<std::string> files;
  std::string goal;
  long limit = 0;
  bool trace = false;
  std::string extract_dir;
  app.add_option("--consult", files, "Load a program file (repeatable, loaded in order)");
  app.add_option("--goal", goal, "Run one goal, print its answers and exit");
  app.add_option("--limit", limit, "Stop after this many answers in batch mode")->check(CLI::NonNegativeNumber);
  app.add_flag("--trace", trace, "Print every engine resume event on stderr");
  app.add_option("--extract-prelude", extract_dir, "Write the built-in library sources to DIR and exit");
  CLI11_PARSE(app, argc, argv);

  if (!extract_dir.empty()) {
    try {
      horn::extract_prelude(extract_dir);
    } catch (const std::exception& ex) {
      std::cerr << ex.what() << "\n";
      return 2;
    }
    return 0;
  }

  horn::Runtime::Options options;
  options.trace = trace;
  horn::Runtime rt(options);
  for (const auto& file : files) {
    try {
      rt.consult_file(file);
    } catch (const std::exception& ex) {
      std::cerr << ex.what() << "\n";
      return 2;
    }
  }
  if (app.count("--goal")) return run_batch(rt, goal, limit);
  return run_repl(rt);
}
