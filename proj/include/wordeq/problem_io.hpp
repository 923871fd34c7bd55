#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wordeq/errors.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

// Problem text format:
//
//   Variables {X,Y,Z}
//   Letters {a,b}
//   Equation: XbY = bXXZ
//
// Variables are an uppercase letter followed by digits, `_` or `'`; letters are
// single lowercase characters. Every symbol must be declared before use.

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool is_variable_tail(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

inline bool valid_variable_name(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s.substr(1))
    if (!is_variable_tail(c)) return false;
  return true;
}

inline bool valid_letter_name(std::string_view s) {
  return s.size() == 1 && std::islower(static_cast<unsigned char>(s[0]));
}

inline std::vector<std::string_view> parse_set(std::string_view body, std::size_t line_no) {
  body = trim(body);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}')
    throw ParseError("line " + std::to_string(line_no) + ": expected {...}");
  body = trim(body.substr(1, body.size() - 2));
  std::vector<std::string_view> items;
  while (!body.empty()) {
    auto comma = body.find(',');
    items.push_back(trim(body.substr(0, comma)));
    if (items.back().empty()) throw ParseError("line " + std::to_string(line_no) + ": empty set element");
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return items;
}

inline Word parse_word(std::string_view text, const SymbolTable& syms, std::size_t line_no) {
  Word w;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) { throw ParseError("line " + std::to_string(line_no) + ": " + what); };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < text.size() && is_variable_tail(text[j])) ++j;
      auto name = text.substr(i, j - i);
      auto id = syms.find_variable(name);
      if (!id) fail("undeclared variable '" + std::string(name) + "'");
      w.push_back(Term::variable(*id));
      i = j;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      auto id = syms.find_letter(text.substr(i, 1));
      if (!id || *id == kSeparatorLetter) fail(std::string("undeclared letter '") + c + "'");
      w.push_back(Term::letter(*id));
      ++i;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  return w;
}

}  // namespace detail

inline Problem parse_problem(std::string_view text) {
  Problem p;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = detail::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;

    auto starts = [&](std::string_view kw) { return line.substr(0, kw.size()) == kw; };
    if (starts("Variables")) {
      for (auto name : detail::parse_set(line.substr(9), line_no)) {
        if (!detail::valid_variable_name(name))
          throw ParseError("line " + std::to_string(line_no) + ": bad variable name '" + std::string(name) + "'");
        p.symbols.intern_variable(name);
      }
    } else if (starts("Letters")) {
      for (auto name : detail::parse_set(line.substr(7), line_no)) {
        if (!detail::valid_letter_name(name))
          throw ParseError("line " + std::to_string(line_no) + ": bad letter name '" + std::string(name) + "'");
        p.symbols.intern_letter(name);
      }
    } else if (starts("Equation:")) {
      auto body = line.substr(9);
      auto eq = body.find('=');
      if (eq == std::string_view::npos || body.find('=', eq + 1) != std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) + ": equation needs exactly one '='");
      p.formula.equations.push_back({detail::parse_word(detail::trim(body.substr(0, eq)), p.symbols, line_no),
                                     detail::parse_word(detail::trim(body.substr(eq + 1)), p.symbols, line_no)});
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unrecognised line");
    }
  }
  return p;
}

inline std::string print_problem(const Problem& p) {
  std::string out = "Variables {";
  for (std::uint32_t i = 0; i < p.symbols.variable_count(); ++i) {
    if (i != 0) out += ',';
    out += p.symbols.variable_name(i);
  }
  out += "}\nLetters {";
  for (std::uint32_t i = 1; i < p.symbols.letter_count(); ++i) {
    if (i != 1) out += ',';
    out += p.symbols.letter_name(i);
  }
  out += "}\n";
  for (const auto& e : p.formula.equations)
    out += "Equation: " + format_word(e.lhs, p.symbols) + " = " + format_word(e.rhs, p.symbols) + "\n";
  return out;
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

/// Witness sidecar: one `NAME = value` line per variable.
inline std::string print_assignment(const Assignment& a, const SymbolTable& syms) {
  std::string out;
  for (const auto& [var, value] : a) out += syms.variable_name(var) + " = " + format_word(value, syms) + "\n";
  return out;
}

inline Assignment parse_assignment(std::string_view text, const SymbolTable& syms) {
  Assignment a;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = detail::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(line_no) + ": expected NAME = value");
    auto name = detail::trim(line.substr(0, eq));
    auto id = syms.find_variable(name);
    if (!id) throw ParseError("line " + std::to_string(line_no) + ": unknown variable '" + std::string(name) + "'");
    Word value = detail::parse_word(detail::trim(line.substr(eq + 1)), syms, line_no);
    for (const Term& t : value)
      if (t.is_variable()) throw ParseError("line " + std::to_string(line_no) + ": witness values must be letters");
    a[*id] = std::move(value);
  }
  return a;
}

}  // namespace wordeq
