#pragma once

// Model documents:
//
//   # comment
//   features: p, q            or   basic: p, q   (adds o(p), o(q) after p, q)
//   values: yellow, red, blue
//   protected: p
//   table:
//     11 -> yellow            one row per state; first bit = first feature
//   rules:
//     p & ~q -> blue          first matching rule wins
//   default: red
//
// A document with only the vocabulary sections is allowed; it declares a
// vocabulary without a model.

#include <cctype>
#include <cstddef>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcl/dynamics.hpp"
#include "bcl/error.hpp"
#include "bcl/model.hpp"
#include "bcl/rules.hpp"
#include "bcl/syntax.hpp"
#include "bcl/vocabulary.hpp"

namespace bcl {

struct ModelDocument {
  std::shared_ptr<const Vocabulary> vocabulary;
  std::optional<ClassifierModel> model;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_names(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline Error line_error(std::size_t line, const std::string& what) {
  return Error("line " + std::to_string(line) + ": " + what);
}

// Splits "lhs -> rhs" at the last arrow; value names never contain '>'.
inline std::pair<std::string_view, std::string_view> split_row(std::string_view s, std::size_t line) {
  const auto at = s.rfind("->");
  if (at == std::string_view::npos) throw line_error(line, "expected 'lhs -> value'");
  return {trim(s.substr(0, at)), trim(s.substr(at + 2))};
}

inline std::string strip_comment(const std::string& raw) {
  const auto hash = raw.find('#');
  return hash == std::string::npos ? raw : raw.substr(0, hash);
}

}  // namespace detail

inline ModelDocument parse_model(std::string_view text) {
  enum class Section { kNone, kTable, kRules };
  std::optional<std::vector<std::string>> features, basic, values;
  std::vector<std::string> protected_names;
  std::vector<std::pair<std::size_t, std::string>> table_rows, rule_rows;
  std::optional<std::pair<std::size_t, std::string>> default_value;
  Section section = Section::kNone;
  bool saw_table = false, saw_rules = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = detail::strip_comment(raw);
    const std::string_view s = detail::trim(stripped);
    if (s.empty()) continue;
    const auto colon = s.find(':');
    const std::string_view key = colon == std::string_view::npos ? "" : detail::trim(s.substr(0, colon));
    const std::string_view rest = colon == std::string_view::npos ? "" : detail::trim(s.substr(colon + 1));
    if (key == "features" || key == "basic" || key == "values" || key == "protected") {
      section = Section::kNone;
      auto names = detail::split_names(rest);
      if (key == "features") {
        features = std::move(names);
      } else if (key == "basic") {
        basic = std::move(names);
      } else if (key == "values") {
        values = std::move(names);
      } else {
        protected_names = std::move(names);
      }
    } else if (key == "table" && rest.empty()) {
      section = Section::kTable;
      saw_table = true;
    } else if (key == "rules" && rest.empty()) {
      section = Section::kRules;
      saw_rules = true;
    } else if (key == "default") {
      section = Section::kNone;
      default_value = {line, std::string(rest)};
    } else if (section == Section::kTable) {
      table_rows.emplace_back(line, std::string(s));
    } else if (section == Section::kRules) {
      rule_rows.emplace_back(line, std::string(s));
    } else {
      throw detail::line_error(line, "unexpected text '" + std::string(s) + "'");
    }
  }

  if (features && basic) throw Error("declare either 'features:' or 'basic:', not both");
  if (!values) throw Error("missing 'values:' section");
  if (saw_table && saw_rules) throw Error("declare either 'table:' or 'rules:', not both");
  if (!features && !basic) features.emplace();
  auto voc = std::make_shared<const Vocabulary>(
      basic ? Vocabulary::epistemic(*basic, *values, protected_names)
            : Vocabulary::make(*features, *values, protected_names));

  ModelDocument doc{voc, std::nullopt};
  if (saw_table) {
    std::vector<std::pair<State, ValueId>> rows;
    for (const auto& [ln, row] : table_rows) {
      const auto [bits, value] = detail::split_row(row, ln);
      try {
        rows.emplace_back(parse_state(bits, voc->feature_count()), voc->value(value));
      } catch (const Error& e) {
        throw detail::line_error(ln, e.what());
      }
    }
    doc.model = build_from_table(*voc, rows);
    doc.model = ClassifierModel(voc, doc.model->table());
  } else if (saw_rules || default_value) {
    if (!default_value) throw Error("a 'rules:' section needs a 'default:' value");
    std::vector<Rule> rules;
    for (const auto& [ln, row] : rule_rows) {
      const auto [condition, value] = detail::split_row(row, ln);
      try {
        rules.push_back({parse_formula(condition, *voc), voc->value(value)});
      } catch (const ParseError& e) {
        throw detail::line_error(ln, e.what());
      } catch (const Error& e) {
        throw detail::line_error(ln, e.what());
      }
    }
    ValueId fallback;
    try {
      fallback = voc->value(default_value->second);
    } catch (const Error& e) {
      throw detail::line_error(default_value->first, e.what());
    }
    doc.model = ClassifierModel(voc, build_from_rules(*voc, rules, fallback).table());
  }
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ModelDocument load_model(const std::string& path) {
  try {
    return parse_model(read_file(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

namespace detail {

inline std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace detail

/// Writes a model as a table document that parse_model reads back.
inline void write_model(std::ostream& out, const ClassifierModel& c) {
  const Vocabulary& voc = c.vocabulary();
  if (voc.is_epistemic()) {
    std::vector<std::string> basic(voc.features().begin(),
                                   voc.features().begin() + static_cast<std::ptrdiff_t>(voc.basic_count()));
    out << "basic: " << detail::join(basic) << '\n';
  } else {
    out << "features: " << detail::join(voc.features()) << '\n';
  }
  out << "values: " << detail::join(voc.values()) << '\n';
  if (!voc.protected_features().empty()) {
    std::vector<std::string> names;
    for (auto i : voc.protected_features().indices()) names.push_back(voc.feature_name(i));
    out << "protected: " << detail::join(names) << '\n';
  }
  out << "table:\n";
  for_each_state(c, [&](State s) {
    out << "  " << state_bits(s, voc.feature_count()) << " -> " << voc.value_name(c.classify(s)) << '\n';
  });
}

/// Training files: one 'bits -> value' line per pair; '#' comments.
inline std::vector<TrainingPair> parse_training(std::string_view text, const Vocabulary& voc) {
  std::vector<TrainingPair> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = detail::strip_comment(raw);
    const std::string_view s = detail::trim(stripped);
    if (s.empty()) continue;
    const auto [bits, value] = detail::split_row(s, line);
    try {
      out.push_back({parse_state(bits, voc.feature_count()), voc.value(value)});
    } catch (const Error& e) {
      throw detail::line_error(line, e.what());
    }
  }
  return out;
}

}  // namespace bcl
