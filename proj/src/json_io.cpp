#include "sigmoment/json_io.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sigmoment::io {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& what)
    : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

SchemaError::SchemaError(const std::string& pointer, const std::string& what)
    : Error((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the 1-based offset of the offending byte.
    const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(source, line, column, what);
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

// ------------------------------------------------------------------ helpers

namespace {

const Json& field(const Json& j, const char* key, const std::string& pointer) {
  if (!j.is_object()) throw SchemaError(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(pointer, std::string("missing field '") + key + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* key, const std::string& pointer) {
  const Json& a = field(j, key, pointer);
  if (!a.is_array()) throw SchemaError(pointer + "/" + key, "expected an array");
  return a;
}

std::string string_field(const Json& j, const char* key, const std::string& pointer) {
  const Json& v = field(j, key, pointer);
  if (!v.is_string()) throw SchemaError(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::size_t read_count(const Json& j, const std::string& pointer) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw SchemaError(pointer, "expected a non-negative integer");
  return j.get<std::size_t>();
}

bool read_bool(const Json& j, const char* key, const std::string& pointer, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw SchemaError(pointer + "/" + key, "expected true or false");
  return it->get<bool>();
}

Point<Rational> read_point(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw SchemaError(pointer, "expected an array of numbers");
  Point<Rational> p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(read_value(j[i], pointer + "/" + std::to_string(i)));
  return p;
}

Point<Rational> read_point(const Json& j, std::size_t d, const std::string& pointer) {
  auto p = read_point(j, pointer);
  if (p.size() != d)
    throw SchemaError(pointer, "expected " + std::to_string(d) + " coordinates, got " +
                                   std::to_string(p.size()));
  return p;
}

template <typename T>
Json write_point(const Point<T>& p) {
  Json a = Json::array();
  for (const auto& v : p) a.push_back(write_value(v));
  return a;
}

std::vector<unsigned> read_alpha(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw SchemaError(pointer, "expected an exponent array");
  std::vector<unsigned> alpha;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto e = read_count(j[i], pointer + "/" + std::to_string(i));
    if (e > std::numeric_limits<unsigned>::max()) throw SchemaError(pointer, "exponent too large");
    alpha.push_back(static_cast<unsigned>(e));
  }
  return alpha;
}

Json write_alpha(const MultiIndex& a) { return Json(a.exponents()); }

Interval read_interval(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(pointer, "expected [lo, hi]");
  Interval iv{read_value(j[0], pointer + "/0"), read_value(j[1], pointer + "/1")};
  if (iv.hi < iv.lo) throw SchemaError(pointer, "interval has lo > hi");
  return iv;
}

Json write_interval(const Interval& iv) { return Json::array({write_value(iv.lo), write_value(iv.hi)}); }

NodeSequence read_sequence(const Json& j, const std::string& pointer) {
  const std::string kind = string_field(j, "kind", pointer);
  try {
    if (kind == "list") {
      std::vector<Rational> values;
      const Json& a = array_field(j, "values", pointer);
      for (std::size_t i = 0; i < a.size(); ++i)
        values.push_back(read_value(a[i], pointer + "/values/" + std::to_string(i)));
      return NodeSequence::list(std::move(values), read_bool(j, "unbounded", pointer, false));
    }
    if (kind == "power") {
      const auto& e = field(j, "exponent", pointer);
      return NodeSequence::power(read_value(field(j, "scale", pointer), pointer + "/scale"),
                                 read_value(field(j, "offset", pointer), pointer + "/offset"),
                                 static_cast<unsigned>(read_count(e, pointer + "/exponent")));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(pointer, e.what());
  }
  throw SchemaError(pointer + "/kind", "unknown sequence kind '" + kind + "' (list or power)");
}

Json write_sequence(const NodeSequence& s) {
  Json j;
  if (s.is_power()) {
    j["kind"] = "power";
    j["scale"] = write_value(s.scale());
    j["offset"] = write_value(s.offset());
    j["exponent"] = s.exponent();
  } else {
    j["kind"] = "list";
    j["values"] = write_point(s.values());
    j["unbounded"] = s.unbounded();
  }
  return j;
}

std::size_t read_axis(const Json& j, std::size_t d, const std::string& pointer) {
  const std::size_t axis = read_count(j, pointer);
  if (axis < 1 || axis > d) throw SchemaError(pointer, "axis must be in 1.." + std::to_string(d));
  return axis - 1;
}

std::size_t read_dimension(const Json& j) {
  const std::size_t d = read_count(field(j, "dimension", ""), "/dimension");
  if (d == 0) throw SchemaError("/dimension", "dimension must be >= 1");
  return d;
}

template <typename T>
std::vector<Json> residual_array(const std::vector<T>& residuals,
                                 const std::vector<MultiIndex>& basis) {
  std::vector<Json> out;
  for (std::size_t k = 0; k < residuals.size(); ++k)
    out.push_back(Json{{"alpha", write_alpha(basis[k])}, {"value", write_value(residuals[k])}});
  return out;
}

Json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

// ------------------------------------------------------------------- values

Rational read_value(const Json& j, const std::string& pointer) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(mpz_class(std::to_string(j.get<std::uint64_t>())));
    return Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(pointer, "non-finite number");
    return Rational(v);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw SchemaError(pointer, e.what());
    }
  }
  throw SchemaError(pointer, "expected a number or a \"num/den\" string");
}

Json write_value(const Rational& v) { return format_rational(v); }

Json write_value(double v) {
  if (!std::isfinite(v)) throw Error("cannot write a non-finite number");
  return v;
}

// ------------------------------------------------------------------ moments

MomentSequence<Rational> read_moments(const Json& j) {
  const std::size_t d = read_dimension(j);
  const std::size_t n = read_count(field(j, "max_degree", ""), "/max_degree");
  const auto basis = enumerate_basis(d, static_cast<unsigned>(n));
  const BasisIndex index(basis);
  std::vector<Rational> values(basis.size());
  std::vector<bool> seen(basis.size(), false);
  const Json& entries = array_field(j, "entries", "");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string p = "/entries/" + std::to_string(i);
    auto alpha = read_alpha(field(entries[i], "alpha", p), p + "/alpha");
    if (alpha.size() != d) throw SchemaError(p + "/alpha", "expected " + std::to_string(d) + " exponents");
    const MultiIndex a(std::move(alpha));
    const std::size_t k = index.find(a);
    if (k == basis.size()) throw SchemaError(p + "/alpha", "degree exceeds max_degree");
    if (seen[k]) throw SchemaError(p + "/alpha", "repeated multi-index " + a.to_string());
    seen[k] = true;
    values[k] = read_value(field(entries[i], "value", p), p + "/value");
  }
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (!seen[k]) throw SchemaError("/entries", "missing multi-index " + basis[k].to_string());
  return MomentSequence<Rational>(d, static_cast<unsigned>(n), std::move(values));
}

template <typename T>
Json write_moments(const MomentSequence<T>& s) {
  Json j;
  j["dimension"] = s.dimension();
  j["max_degree"] = s.max_degree();
  j["entries"] = residual_array(s.values(), s.basis());
  return j;
}

// ------------------------------------------------------------------ measure

SignedAtomicMeasure<Rational> read_measure(const Json& j) {
  const std::size_t d = read_dimension(j);
  std::vector<Atom<Rational>> atoms;
  const Json& a = array_field(j, "atoms", "");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string p = "/atoms/" + std::to_string(i);
    atoms.push_back({read_point(field(a[i], "point", p), d, p + "/point"),
                     read_value(field(a[i], "weight", p), p + "/weight")});
  }
  return SignedAtomicMeasure<Rational>(d, std::move(atoms));
}

template <typename T>
Json write_measure(const SignedAtomicMeasure<T>& mu) {
  Json j;
  j["dimension"] = mu.dimension();
  Json atoms = Json::array();
  for (const auto& a : mu.atoms())
    atoms.push_back(Json{{"point", write_point(a.point)}, {"weight", write_value(a.weight)}});
  j["atoms"] = std::move(atoms);
  return j;
}

// ------------------------------------------------------------------ support

SupportSpec read_support(const Json& j) {
  const std::string cls = string_field(j, "class", "");
  const bool certified = read_bool(j, "certified_representable", "", false);
  try {
    if (cls == "FullSpace") return SupportSpec(read_dimension(j), FullSpace{}, certified);
    if (cls == "Orthant") return SupportSpec(read_dimension(j), Orthant{}, certified);
    if (cls == "Grid") {
      Grid g;
      const Json& axes = array_field(j, "axes", "");
      for (std::size_t i = 0; i < axes.size(); ++i)
        g.axes.push_back(read_sequence(axes[i], "/axes/" + std::to_string(i)));
      const std::size_t d = g.axes.size();
      return SupportSpec(d, std::move(g), certified);
    }
    if (cls == "Strip") {
      Strip s;
      const Json& coords = array_field(j, "coordinates", "");
      for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::string p = "/coordinates/" + std::to_string(i);
        if (coords[i].is_null()) {
          s.coordinates.emplace_back(std::nullopt);
        } else {
          s.coordinates.emplace_back(read_interval(field(coords[i], "interval", p), p + "/interval"));
        }
      }
      const std::size_t d = s.coordinates.size();
      return SupportSpec(d, std::move(s), certified);
    }
    if (cls == "BoundedBox") {
      BoundedBox b;
      const Json& ivs = array_field(j, "intervals", "");
      for (std::size_t i = 0; i < ivs.size(); ++i)
        b.intervals.push_back(read_interval(ivs[i], "/intervals/" + std::to_string(i)));
      const std::size_t d = b.intervals.size();
      return SupportSpec(d, std::move(b), certified);
    }
    if (cls == "PointSequence1D")
      return SupportSpec(1, PointSequence1D{read_sequence(field(j, "sequence", ""), "/sequence")},
                         certified);
    if (cls == "UnionOfRays") {
      const std::size_t d = read_dimension(j);
      UnionOfRays u;
      const Json& rays = array_field(j, "rays", "");
      for (std::size_t i = 0; i < rays.size(); ++i) {
        const std::string p = "/rays/" + std::to_string(i);
        u.rays.push_back({read_point(field(rays[i], "origin", p), d, p + "/origin"),
                          read_point(field(rays[i], "direction", p), d, p + "/direction")});
      }
      return SupportSpec(d, std::move(u), certified);
    }
    if (cls == "AffineCone") {
      AffineCone c;
      c.vertex = read_point(field(j, "vertex", ""), "/vertex");
      const std::size_t d = c.vertex.size();
      const Json& gens = array_field(j, "generators", "");
      for (std::size_t i = 0; i < gens.size(); ++i)
        c.generators.push_back(read_point(gens[i], d, "/generators/" + std::to_string(i)));
      return SupportSpec(d, std::move(c), certified);
    }
    if (cls == "SampledSet") {
      const std::size_t d = read_dimension(j);
      SampledSet s;
      const Json& pts = array_field(j, "points", "");
      for (std::size_t i = 0; i < pts.size(); ++i)
        s.points.push_back(read_point(pts[i], d, "/points/" + std::to_string(i)));
      if (auto it = j.find("escape"); it != j.end()) {
        if (!it->is_array()) throw SchemaError("/escape", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
          const std::string p = "/escape/" + std::to_string(i);
          const Json& g = (*it)[i];
          EscapeGenerator e;
          e.axis = read_axis(field(g, "axis", p), d, p + "/axis");
          const Json& bases = array_field(g, "bases", p);
          if (bases.size() != d - 1)
            throw SchemaError(p + "/bases", "expected one node set per remaining coordinate");
          for (std::size_t b = 0; b < bases.size(); ++b)
            e.bases.push_back(read_sequence(bases[b], p + "/bases/" + std::to_string(b)));
          e.values = read_sequence(field(g, "values", p), p + "/values");
          s.escapes.push_back(std::move(e));
        }
      }
      return SupportSpec(d, std::move(s), certified);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("", e.what());
  } catch (const Error& e) {
    throw SchemaError("", e.what());
  }
  throw SchemaError("/class", "unknown support class '" + cls + "'");
}

Json write_support(const SupportSpec& k) {
  Json j;
  j["class"] = k.class_name();
  const std::size_t d = k.dimension();
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FullSpace> || std::is_same_v<S, Orthant>) {
          j["dimension"] = d;
        } else if constexpr (std::is_same_v<S, Grid>) {
          Json axes = Json::array();
          for (const auto& a : s.axes) axes.push_back(write_sequence(a));
          j["axes"] = std::move(axes);
        } else if constexpr (std::is_same_v<S, Strip>) {
          Json coords = Json::array();
          for (const auto& c : s.coordinates) {
            if (c) coords.push_back(Json{{"interval", write_interval(*c)}});
            else coords.push_back(nullptr);
          }
          j["coordinates"] = std::move(coords);
        } else if constexpr (std::is_same_v<S, BoundedBox>) {
          Json ivs = Json::array();
          for (const auto& iv : s.intervals) ivs.push_back(write_interval(iv));
          j["intervals"] = std::move(ivs);
        } else if constexpr (std::is_same_v<S, PointSequence1D>) {
          j["sequence"] = write_sequence(s.sequence);
        } else if constexpr (std::is_same_v<S, UnionOfRays>) {
          j["dimension"] = d;
          Json rays = Json::array();
          for (const auto& r : s.rays)
            rays.push_back(Json{{"origin", write_point(r.origin)}, {"direction", write_point(r.direction)}});
          j["rays"] = std::move(rays);
        } else if constexpr (std::is_same_v<S, AffineCone>) {
          j["vertex"] = write_point(s.vertex);
          Json gens = Json::array();
          for (const auto& g : s.generators) gens.push_back(write_point(g));
          j["generators"] = std::move(gens);
        } else if constexpr (std::is_same_v<S, SampledSet>) {
          j["dimension"] = d;
          Json pts = Json::array();
          for (const auto& p : s.points) pts.push_back(write_point(p));
          j["points"] = std::move(pts);
          Json esc = Json::array();
          for (const auto& e : s.escapes) {
            Json bases = Json::array();
            for (const auto& b : e.bases) bases.push_back(write_sequence(b));
            esc.push_back(Json{{"axis", e.axis + 1}, {"bases", std::move(bases)},
                               {"values", write_sequence(e.values)}});
          }
          j["escape"] = std::move(esc);
        }
      },
      k.shape());
  if (k.certified_representable()) j["certified_representable"] = true;
  return j;
}

// ------------------------------------------------------------------ reports

template <typename T>
Json write_polynomial(const Polynomial<T>& p) {
  Json terms = Json::array();
  for (const auto& [alpha, c] : p.terms())
    terms.push_back(Json{{"alpha", write_alpha(alpha)}, {"coefficient", write_value(c)}});
  return Json{{"dimension", p.dimension()}, {"text", p.to_string()}, {"terms", std::move(terms)}};
}

template <typename T>
Json write_match_result(const MatchResult<T>& r) {
  Json j = write_measure(r.measure);
  j["total_variation"] = write_value(r.total_variation);
  j["residuals"] = residual_array(r.residuals, enumerate_basis(r.measure.dimension(), r.diagnostics.degree));
  const auto& d = r.diagnostics;
  j["diagnostics"] = Json{{"mode", to_string(d.mode)},
                          {"degree", d.degree},
                          {"objective", to_string(d.objective)},
                          {"nodes", d.nodes},
                          {"rank", d.rank},
                          {"required_rank", d.required_rank},
                          {"condition", finite_or_null(d.condition)},
                          {"attempts", d.attempts},
                          {"sampling", d.sampling},
                          {"solver", d.solver},
                          {"lp_iterations", d.lp_iterations},
                          {"max_abs_residual", d.max_abs_residual},
                          {"max_rel_residual", d.max_rel_residual},
                          {"contract_met", d.contract_met}};
  return j;
}

Json write_match_report(const MatchReport& r) {
  return Json{{"max_abs_residual", r.max_abs_residual},
              {"max_rel_residual", r.max_rel_residual},
              {"exact_zero", r.exact_zero},
              {"atoms_outside_support", r.atoms_outside},
              {"contract_met", r.contract_met}};
}

Json write_growth_report(const GrowthReport& g, bool include_trace) {
  Json j{{"polynomial", write_polynomial(g.polynomial)},
         {"weight_exponent", g.weight_exponent},
         {"verdict", to_string(g.verdict)},
         {"lambda", finite_or_null(g.lambda)},
         {"tail_slope", finite_or_null(g.tail_slope)},
         {"samples_used", g.samples_used},
         {"stages", g.trace.size()},
         {"reason", g.reason}};
  if (include_trace) {
    Json trace = Json::array();
    for (const auto& s : g.trace)
      trace.push_back(Json{{"radius", finite_or_null(s.radius)}, {"max_ratio", finite_or_null(s.max_ratio)}});
    j["trace"] = std::move(trace);
  }
  return j;
}

namespace {

Json write_condition_star(const ConditionStar& cs) {
  Json axes = Json::array();
  for (const auto& a : cs.axes) {
    Json e{{"axis", a.axis + 1},
           {"status", a.status == EscapeQuery::Status::Available ? "available"
                      : a.status == EscapeQuery::Status::None    ? "none"
                                                                 : "unknown"},
           {"bases", a.bases},
           {"infinite_bases", a.infinite_bases},
           {"holds", a.holds},
           {"note", a.note}};
    if (a.base_rank) {
      e["base_rank"] = *a.base_rank;
      e["required_rank"] = a.required_rank;
    }
    axes.push_back(std::move(e));
  }
  Json j{{"result", to_string(cs.kind)}, {"frame", cs.frame}, {"reason", cs.reason}, {"axes", std::move(axes)}};
  if (cs.failing_axis) j["failing_axis"] = *cs.failing_axis + 1;
  return j;
}

Json write_nn(const NnDimension& nn) {
  Json j{{"kind", to_string(nn.kind)}, {"reason", nn.reason}};
  if (nn.kind == NnDimension::Kind::Finite) {
    j["lower_bound"] = nn.lower_bound;
    j["upper_bound"] = nn.upper_bound;
    if (nn.exact) j["exact"] = *nn.exact;
    j["basis"] = nn.basis_description;
  }
  if (nn.witness_generator) {
    j["witness_generator"] = write_polynomial(*nn.witness_generator);
    j["witness_family"] = nn.witness_is_power_family ? "powers" : "generator * x1^m";
  }
  return j;
}

}  // namespace

Json write_analysis_report(const AnalysisReport& r) {
  Json j{{"verdict", to_string(r.verdict)},
         {"degree_checked", r.degree_checked},
         {"mode", to_string(r.mode)}};
  if (!r.sufficient_condition.empty()) j["sufficient_condition"] = r.sufficient_condition;
  Json w{{"kind", to_string(r.witness_kind)}};
  if (r.witness) w["polynomial"] = write_polynomial(*r.witness);
  if (r.float_witness) w["float_polynomial"] = write_polynomial(*r.float_witness);
  if (!r.witness_family.empty()) w["family"] = r.witness_family;
  j["witness"] = std::move(w);
  Json ranks = Json::array();
  for (const auto& dr : r.ranks)
    ranks.push_back(Json{{"degree", dr.degree}, {"rank", dr.rank}, {"required", dr.required}});
  j["density"] = Json{{"samples", r.density_samples}, {"ranks", std::move(ranks)}};
  if (r.condition_star) j["condition_star"] = write_condition_star(*r.condition_star);
  if (r.nn0) j["n0_dimension"] = write_nn(*r.nn0);
  if (r.witness_growth) j["witness_growth"] = write_growth_report(*r.witness_growth);
  j["notes"] = r.notes;
  return j;
}

void write_growth_csv(std::ostream& out, const GrowthReport& g) {
  out << "stage,radius,max_ratio\n";
  out.precision(17);
  for (std::size_t i = 0; i < g.trace.size(); ++i)
    out << i + 1 << ',' << g.trace[i].radius << ',' << g.trace[i].max_ratio << '\n';
}

template Json write_moments(const MomentSequence<Rational>&);
template Json write_moments(const MomentSequence<double>&);
template Json write_measure(const SignedAtomicMeasure<Rational>&);
template Json write_measure(const SignedAtomicMeasure<double>&);
template Json write_polynomial(const Polynomial<Rational>&);
template Json write_polynomial(const Polynomial<double>&);
template Json write_match_result(const MatchResult<Rational>&);
template Json write_match_result(const MatchResult<double>&);

}  // namespace sigmoment::io
