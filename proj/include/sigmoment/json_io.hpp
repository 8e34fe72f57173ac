#pragma once

// JSON documents read and written by the command-line tool. The shapes are
// described by the files under schemas/. Exact values are written as
// "num/den" strings; readers accept those strings, decimal strings, and
// plain JSON numbers (integers are exact, other numbers are read as doubles).

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sigmoment/analysis.hpp"
#include "sigmoment/construct.hpp"

namespace sigmoment::io {

using Json = nlohmann::ordered_json;

// Malformed JSON text, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed JSON that does not match the expected document shape.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

Json parse_text(const std::string& text, const std::string& source = "<input>");
Json read_file(const std::string& path);

Rational read_value(const Json& j, const std::string& pointer);
Json write_value(const Rational& v);
Json write_value(double v);

MomentSequence<Rational> read_moments(const Json& j);
template <typename T>
Json write_moments(const MomentSequence<T>& s);

SignedAtomicMeasure<Rational> read_measure(const Json& j);
template <typename T>
Json write_measure(const SignedAtomicMeasure<T>& mu);

SupportSpec read_support(const Json& j);
Json write_support(const SupportSpec& k);

template <typename T>
Json write_polynomial(const Polynomial<T>& p);

template <typename T>
Json write_match_result(const MatchResult<T>& r);
Json write_match_report(const MatchReport& r);

Json write_growth_report(const GrowthReport& g, bool include_trace = true);
Json write_analysis_report(const AnalysisReport& r);
void write_growth_csv(std::ostream& out, const GrowthReport& g);

}  // namespace sigmoment::io
