#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "warplang/elab.hpp"
#include "warplang/eval.hpp"
#include "warplang/parser.hpp"
#include "warplang/warp_expr.hpp"

namespace {

using namespace warplang;

constexpr int kExitTypeError = 1;
constexpr int kExitParseError = 2;

std::string read_input(const std::string& path) {
  std::ostringstream out;
  if (path == "-") {
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream in(path);
  if (!in.good()) throw ParseError({}, "cannot open '" + path + "'");
  out << in.rdbuf();
  return out.str();
}

int report(const std::string& file, const Span& span, const std::string& msg,
           int code) {
  std::cerr << file;
  if (span.line > 0) std::cerr << ":" << span.to_string();
  std::cerr << ": error: " << msg << "\n";
  return code;
}

int cmd_check(const std::string& file) {
  auto defs = elaborate_program(parse_program(read_input(file)));
  for (auto& d : defs)
    if (!d.hidden) std::cout << d.name << " : " << to_string(d.type) << "\n";
  return 0;
}

int cmd_elab(const std::string& file) {
  auto defs = elaborate_program(parse_program(read_input(file)));
  for (auto& d : defs) {
    if (d.hidden) continue;
    std::cout << d.name << " : " << to_string(d.type) << " =\n  "
              << to_string(d.term) << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& file, const std::string& steps,
             const std::string& only, bool json_out) {
  ExtNat n = 0;
  if (steps == "omega" || steps == "w") {
    n = ExtNat::omega();
  } else {
    size_t pos = 0;
    unsigned long long parsed = std::stoull(steps, &pos);
    if (pos != steps.size())
      throw ParseError({}, "bad --steps value '" + steps + "'");
    n = ExtNat(parsed);
  }

  auto defs = elaborate_program(parse_program(read_input(file)));
  bool found = only.empty();
  Env env;
  nlohmann::json out = nlohmann::json::array();
  for (auto& d : defs) {
    ValuePtr v = evaluate(d.term, env, n);
    env = env.extend(d.name, v);
    if (d.hidden || (!only.empty() && d.name != only)) continue;
    found = true;
    if (json_out)
      out.push_back({{"name", d.name}, {"value", value_to_json(v)}});
    else
      std::cout << d.name << " = " << to_string(v) << "\n";
  }
  if (!found) throw TypeError({}, "no definition named '" + only + "'");
  if (json_out) std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_warp(const std::string& expr) {
  WarpQuery q = eval_warp_expr(expr);
  switch (q.kind) {
    case WarpQuery::Kind::Warp: std::cout << q.warp.to_string() << "\n"; break;
    case WarpQuery::Kind::Bool:
      std::cout << (q.boolean ? "true" : "false") << "\n";
      break;
    case WarpQuery::Kind::Number:
      std::cout << q.number.to_string() << "\n";
      break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warplang: type checker and interpreter for warped streams"};
  app.require_subcommand(1);

  std::string file, steps = "0", only, expr;
  bool json_out = false;

  auto* check = app.add_subcommand("check", "type-check a program");
  check->add_option("file", file, "program file, or '-' for stdin")->required();

  auto* elab = app.add_subcommand("elab", "print elaborated explicit terms");
  elab->add_option("file", file, "program file, or '-' for stdin")->required();

  auto* eval = app.add_subcommand("eval", "evaluate definitions at a fuel");
  eval->add_option("file", file, "program file, or '-' for stdin")->required();
  eval->add_option("--steps", steps, "fuel: a natural number or 'omega'")
      ->required();
  eval->add_option("--def", only, "evaluate only this definition");
  eval->add_flag("--json", json_out, "emit values as JSON trees");

  auto* warp = app.add_subcommand("warp", "evaluate a warp expression");
  warp->add_option("expr", expr,
                   "expression over warp literals with * \\ sup inf <= @")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(file);
    if (elab->parsed()) return cmd_elab(file);
    if (eval->parsed()) return cmd_eval(file, steps, only, json_out);
    return cmd_warp(expr);
  } catch (const ParseError& e) {
    return report(file.empty() ? expr : file, e.span, e.what(),
                  kExitParseError);
  } catch (const TypeError& e) {
    return report(file, e.span, e.what(), kExitTypeError);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
