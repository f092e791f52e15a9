#include "cshc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cshc/error.hpp"

namespace cshc::io {

namespace {

std::string number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kParseError,
                "cannot read '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Token {
  std::string_view text;
  std::size_t line = 0;
  std::size_t offset = 0;  // 1-based column
};

// Splits one line into whitespace-separated tokens.
std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back({line.substr(i, j - i), line_no, i + 1});
    i = j;
  }
  return out;
}

struct Line {
  std::string_view text;
  std::size_t number = 0;
};

// Non-blank, non-comment lines with trailing CR stripped.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t pos = 0;
  std::size_t number = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    out.push_back({line, number});
    if (end == text.size()) break;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t offset,
                       const std::string& what) {
  throw Error(ErrorKind::kParseError, "line " + std::to_string(line) +
                                          ", offset " + std::to_string(offset) +
                                          ": " + what);
}

[[noreturn]] void fail(const Token& t, const std::string& what) {
  fail(t.line, t.offset, what);
}

double parse_double(const Token& t) {
  double v = 0.0;
  auto [ptr, ec] =
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    fail(t, "expected a number, got '" + std::string(t.text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const Token& t) {
  Int v = 0;
  auto [ptr, ec] =
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    fail(t, "expected an integer, got '" + std::string(t.text) + "'");
  }
  return v;
}

void expect_header(const std::vector<Line>& lines, std::string_view magic,
                   int version) {
  if (lines.empty()) fail(1, 1, "empty file");
  const std::vector<Token> head = tokenize(lines[0].text, lines[0].number);
  if (head.size() != 2 || head[0].text != magic) {
    fail(lines[0].number, 1,
         "expected header '" + std::string(magic) + " " +
             std::to_string(version) + "'");
  }
  if (parse_int<int>(head[1]) != version) {
    fail(head[1], "unsupported format version " + std::string(head[1].text));
  }
}

// Variable declarations starting at lines[pos]; advances pos past them.
SchemaPtr parse_vars(const std::vector<Line>& lines, std::size_t& pos,
                     std::vector<Token>* leftover) {
  std::vector<Variable> vars;
  std::size_t first_line = lines.size() > pos ? lines[pos].number : 1;
  for (; pos < lines.size(); ++pos) {
    std::vector<Token> tok = tokenize(lines[pos].text, lines[pos].number);
    if (tok[0].text != "var") {
      if (leftover) *leftover = std::move(tok);
      break;
    }
    if (tok.size() != 3) fail(tok[0], "expected 'var <name> <cardinality>'");
    const int card = parse_int<int>(tok[2]);
    if (card < 2) fail(tok[2], "cardinality must be at least 2");
    for (const Variable& v : vars) {
      if (v.name == tok[1].text) {
        fail(tok[1], "duplicate variable '" + std::string(tok[1].text) + "'");
      }
    }
    if (tok[1].text.find_first_of("=,{}|") != std::string_view::npos) {
      fail(tok[1], "variable names may not contain = , { } |");
    }
    vars.push_back({std::string(tok[1].text), card});
  }
  if (vars.empty()) fail(first_line, 1, "no variable declarations");
  try {
    return make_schema(std::move(vars));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kCapExceeded) throw;
    fail(first_line, 1, e.what());
  }
}

std::string format_vars(const DomainSchema& schema) {
  std::string out;
  for (const Variable& v : schema.variables()) {
    out += "var " + v.name + " " + std::to_string(v.cardinality) + "\n";
  }
  return out;
}

std::string_view rest_of_line(const Line& line, const Token& after) {
  std::size_t start = after.offset - 1 + after.text.size();
  std::string_view rest = line.text.substr(start);
  const std::size_t first = rest.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  rest.remove_prefix(first);
  const std::size_t last = rest.find_last_not_of(" \t");
  return rest.substr(0, last + 1);
}

}  // namespace

// --- distributions ----------------------------------------------------------

DistributionFile parse_distribution(std::string_view text) {
  const std::vector<Line> lines = content_lines(text);
  expect_header(lines, "cshc-distribution", kDistributionVersion);
  std::size_t pos = 1;
  std::string description;
  std::optional<std::uint64_t> seed;
  // Metadata may precede the declarations.
  for (; pos < lines.size(); ++pos) {
    std::vector<Token> tok = tokenize(lines[pos].text, lines[pos].number);
    if (tok[0].text == "description") {
      description = std::string(rest_of_line(lines[pos], tok[0]));
    } else if (tok[0].text == "seed") {
      if (tok.size() != 2) fail(tok[0], "expected 'seed <integer>'");
      seed = parse_int<std::uint64_t>(tok[1]);
    } else {
      break;
    }
  }
  std::vector<Token> next;
  const SchemaPtr schema = parse_vars(lines, pos, &next);
  if (pos >= lines.size() || next.empty() || next[0].text != "table") {
    if (pos >= lines.size()) {
      fail(lines.back().number + 1, 1, "missing 'table' section");
    }
    fail(next[0], "expected 'table', got '" + std::string(next[0].text) + "'");
  }
  if (next.size() != 1) fail(next[1], "'table' must stand on its own line");

  std::vector<double> entries;
  entries.reserve(schema->num_states());
  std::size_t last_line = lines[pos].number;
  for (++pos; pos < lines.size(); ++pos) {
    last_line = lines[pos].number;
    for (const Token& t : tokenize(lines[pos].text, lines[pos].number)) {
      const double v = parse_double(t);
      if (!std::isfinite(v)) fail(t, "entry is not finite");
      if (v < 0.0) fail(t, "negative entry " + std::string(t.text));
      entries.push_back(v);
    }
  }
  if (entries.size() != schema->num_states()) {
    fail(last_line, 1,
         "expected " + std::to_string(schema->num_states()) +
             " table entries, got " + std::to_string(entries.size()));
  }
  return DistributionFile{kDistributionVersion, std::move(description), seed,
                          JointTable(schema, std::move(entries))};
}

DistributionFile read_distribution(const std::filesystem::path& path) {
  return parse_distribution(slurp(path));
}

std::string format_distribution(const JointTable& p,
                                std::string_view description,
                                std::optional<std::uint64_t> seed) {
  std::string out =
      "cshc-distribution " + std::to_string(kDistributionVersion) + "\n";
  if (!description.empty()) out += "description " + std::string(description) + "\n";
  if (seed) out += "seed " + std::to_string(*seed) + "\n";
  out += format_vars(p.schema());
  out += "table\n";
  for (double v : p.probabilities()) out += number(v) + "\n";
  return out;
}

// --- feature files -----------------------------------------------------------

FeatureFile parse_features(std::string_view text) {
  const std::vector<Line> lines = content_lines(text);
  expect_header(lines, "cshc-features", kFeaturesVersion);
  std::size_t pos = 1;
  std::vector<Token> next;
  FeatureFile out;
  out.schema = parse_vars(lines, pos, &next);
  for (; pos < lines.size(); ++pos) {
    std::vector<Token> tok = tokenize(lines[pos].text, lines[pos].number);
    if (tok[0].text == "logZ" || tok[0].text == "residual") {
      if (tok.size() != 2) fail(tok[0], "expected one value");
      (tok[0].text == "logZ" ? out.log_z : out.residual) =
          parse_double(tok[1]);
      continue;
    }
    if (tok[0].text != "feature") {
      fail(tok[0], "unexpected '" + std::string(tok[0].text) + "'");
    }
    std::size_t first = 1;
    double weight = 0.0;
    if (tok.size() > 1 && tok[1].text.find('=') == std::string_view::npos) {
      weight = parse_double(tok[1]);
      first = 2;
    }
    if (first >= tok.size()) fail(tok[0], "feature with an empty scope");
    Assignment values(out.schema->size());
    for (std::size_t k = first; k < tok.size(); ++k) {
      try {
        Assignment one = parse_context(*out.schema, tok[k].text);
        for (VarIndex v : one.scope().members()) {
          if (values.binds(v)) fail(tok[k], "variable bound twice");
          values.set(v, one.value(v));
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kParseError) throw;
        fail(tok[k], e.what());
      }
    }
    out.features.push_back(Feature{std::move(values)});
    out.weights.push_back(weight);
  }
  return out;
}

FeatureFile read_features(const std::filesystem::path& path) {
  return parse_features(slurp(path));
}

std::string format_features(const LogLinearModel& model, double residual) {
  const DomainSchema& schema = model.schema();
  std::string out =
      "cshc-features " + std::to_string(kFeaturesVersion) + "\n";
  out += format_vars(schema);
  out += "logZ " + number(model.log_z()) + "\n";
  out += "residual " + number(residual) + "\n";
  // Writers keep canonical order regardless of how the model was built.
  std::vector<std::size_t> order(model.features().size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) {
                     return canonical_less(model.features()[x],
                                           model.features()[y]);
                   });
  for (std::size_t k : order) {
    const Feature& f = model.features()[k];
    out += "feature " + number(model.weights()[k]);
    for (VarIndex v : f.scope().members()) {
      out += " " + schema.name(v) + "=" + std::to_string(f.values.value(v));
    }
    out += "\n";
  }
  return out;
}

// --- triplets, CSI listings, graphs ----------------------------------------

std::string describe(const DomainSchema& schema, const Triplet& t) {
  std::string out = "<" + schema.name(t.a) + ", " + schema.name(t.b) + " | " +
                    schema.format(t.cond);
  if (!t.ctx.scope().empty()) out += ", " + format_context(schema, t.ctx);
  return out + ">";
}

std::string format_csi_listing(const CSIModel& csi, VarSet allowed) {
  const DomainSchema& schema = csi.schema();
  std::string out = "# cshc-csis 1\n";
  std::size_t count = 0;
  std::string body;
  csi.for_each([&](const Triplet& t, bool value) {
    if (!value || !allowed.includes(t.ctx.scope())) return;
    ++count;
    body += schema.name(t.a) + " " + schema.name(t.b) + " | " +
            schema.format(t.cond) + " | {" + format_context(schema, t.ctx) +
            "}\n";
  });
  out += "# " + std::to_string(count) + " true triplets\n";
  return out + body;
}

std::string format_csi_listing(const CSIModel& csi) {
  return format_csi_listing(csi, csi.schema().all());
}

CSIModel parse_csi_listing(SchemaPtr schema, std::string_view text) {
  const DomainSchema& s = *schema;
  std::vector<Triplet> listed;
  for (const Line& line : content_lines(text)) {
    auto field = [&](std::size_t from, std::size_t to) {
      std::string_view f = line.text.substr(from, to - from);
      const std::size_t a = f.find_first_not_of(" \t");
      const std::size_t b = f.find_last_not_of(" \t");
      return a == std::string_view::npos ? std::string_view{}
                                         : f.substr(a, b - a + 1);
    };
    const std::size_t bar1 = line.text.find('|');
    const std::size_t bar2 =
        bar1 == std::string_view::npos ? bar1 : line.text.find('|', bar1 + 1);
    if (bar2 == std::string_view::npos) {
      fail(line.number, 1, "expected 'a b | {cond} | {context}'");
    }
    const std::vector<Token> pair =
        tokenize(field(0, bar1), line.number);
    if (pair.size() != 2) fail(line.number, 1, "expected two variables");
    auto braced = [&](std::string_view f, std::size_t offset) {
      if (f.size() < 2 || f.front() != '{' || f.back() != '}') {
        fail(line.number, offset, "expected a braced list");
      }
      return f.substr(1, f.size() - 2);
    };
    try {
      const VarIndex a = s.index_of(pair[0].text);
      const VarIndex b = s.index_of(pair[1].text);
      VarSet cond;
      std::string_view cond_text = braced(field(bar1 + 1, bar2), bar1 + 2);
      while (!cond_text.empty()) {
        std::size_t comma = cond_text.find(',');
        std::string_view name = cond_text.substr(0, comma);
        cond = cond.with(s.index_of(name));
        if (comma == std::string_view::npos) break;
        cond_text.remove_prefix(comma + 1);
      }
      const Context ctx = parse_context(
          s, braced(field(bar2 + 1, line.text.size()), bar2 + 2));
      listed.push_back(Triplet::make(a, b, cond, ctx));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kParseError) throw;
      fail(line.number, 1, e.what());
    }
  }
  CSIModel out = CSIModel::all_false(schema);
  for (const Triplet& t : listed) out = out.with(t, true);
  return out;
}

std::string format_graph(const UndirectedGraph& g, std::string_view context) {
  std::string out = "# cshc-graph 1\n";
  out += "context {" + std::string(context) + "}\n";
  out += "nodes";
  for (const std::string& n : g.nodes()) out += " " + n;
  out += "\nedges " + std::to_string(g.num_edges()) + "\n";
  for (VarIndex v = 0; v < g.size(); ++v) {
    out += g.nodes()[static_cast<std::size_t>(v)] + ":";
    for (VarIndex u : g.neighbors(v).members()) {
      out += " " + g.nodes()[static_cast<std::size_t>(u)];
    }
    out += "\n";
  }
  return out;
}

// --- reports -----------------------------------------------------------------

std::string format_residual(double residual) {
  if (residual < 1e-12) return "<1e-12";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", residual);
  return buf;
}

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string feature_text(const DomainSchema& schema, const Feature& f) {
  return "(" + format_context(schema, f.values) + ")";
}

}  // namespace

std::string format_verify_text(const DomainSchema& schema,
                               const TheoremReport& r) {
  std::ostringstream out;
  out << "# cshc-verify 1\n";
  out << "positivity: " << yes_no(r.positivity) << "\n";
  out << "csi-map: " << yes_no(r.csi_map);
  if (r.csi_map_violation) {
    out << " (fails at " << describe(schema, *r.csi_map_violation) << ")";
  }
  out << "\n";
  out << "reduced models are I-maps of their conditionals: "
      << yes_no(r.reduced_i_maps);
  if (r.reduced_i_map_violation) {
    out << " (fails at " << describe(schema, *r.reduced_i_map_violation)
        << ")";
  }
  out << "\n";
  std::size_t passing = 0;
  for (const ContextVerdict& c : r.contexts) passing += c.graph_isomorph;
  out << "graph-isomorph contexts: " << passing << "/" << r.contexts.size()
      << "\n";
  for (const ContextVerdict& c : r.contexts) {
    out << "  {" << format_context(schema, c.ctx) << "} "
        << (c.graph_isomorph ? "pass" : "FAIL");
    if (c.mismatch) out << " at " << describe(schema, *c.mismatch);
    out << "\n";
  }
  if (!r.factorization_checked) {
    out << "factorization: not checked (preconditions unmet)\n";
  } else {
    out << "features: " << r.features.size()
        << (r.user_features ? " (supplied)" : " (constructed)") << "\n";
    for (const Feature& f : r.features) {
      out << "  " << feature_text(schema, f) << "\n";
    }
    out << "factorizes: " << yes_no(r.factorization.verdict) << " ("
        << r.factorization.num_violations << " violations, "
        << r.factorization.ambiguous_matches << " ambiguous matches)\n";
    for (const FactorizationViolation& v : r.factorization.violations) {
      out << "  " << feature_text(schema, v.feature) << " joins "
          << describe(schema, v.triplet) << "\n";
    }
    out << "residual: " << format_residual(r.fit->residual)
        << " (threshold " << short_number(r.residual_threshold) << ")\n";
    if (r.counts) {
      out << "counts: saturated " << r.counts->saturated << ", ci-pruned "
          << r.counts->ci_pruned << ", csi-pruned " << r.counts->csi_pruned
          << "\n";
    }
  }
  out << "theorem verified: " << yes_no(r.theorem_verified) << "\n";
  return out.str();
}

std::string format_verify_json(const DomainSchema& schema,
                               const TheoremReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = "cshc-verify";
  j["version"] = 1;
  j["positivity"] = r.positivity;
  j["csi_map"] = r.csi_map;
  j["csi_map_violation"] =
      r.csi_map_violation ? ordered_json(describe(schema, *r.csi_map_violation))
                          : ordered_json(nullptr);
  j["reduced_i_maps"] = r.reduced_i_maps;
  j["reduced_i_map_violation"] =
      r.reduced_i_map_violation
          ? ordered_json(describe(schema, *r.reduced_i_map_violation))
          : ordered_json(nullptr);
  ordered_json contexts = ordered_json::array();
  for (const ContextVerdict& c : r.contexts) {
    ordered_json cj;
    cj["context"] = format_context(schema, c.ctx);
    cj["graph_isomorph"] = c.graph_isomorph;
    cj["mismatch"] = c.mismatch ? ordered_json(describe(schema, *c.mismatch))
                                : ordered_json(nullptr);
    contexts.push_back(std::move(cj));
  }
  j["contexts"] = std::move(contexts);
  j["all_graph_isomorph"] = r.all_graph_isomorph;
  j["factorization_checked"] = r.factorization_checked;
  if (r.factorization_checked) {
    ordered_json features = ordered_json::array();
    for (const Feature& f : r.features) {
      features.push_back(format_context(schema, f.values));
    }
    j["features"] = std::move(features);
    j["user_features"] = r.user_features;
    j["factorizes"] = r.factorization.verdict;
    j["violations"] = r.factorization.num_violations;
    j["ambiguous_matches"] = r.factorization.ambiguous_matches;
    ordered_json witnesses = ordered_json::array();
    for (const FactorizationViolation& v : r.factorization.violations) {
      witnesses.push_back({{"feature", format_context(schema, v.feature.values)},
                           {"triplet", describe(schema, v.triplet)}});
    }
    j["witnesses"] = std::move(witnesses);
    j["residual"] = format_residual(r.fit->residual);
    j["residual_ok"] = r.fit->residual <= r.residual_threshold;
    if (r.counts) {
      j["counts"] = {{"saturated", r.counts->saturated},
                     {"ci_pruned", r.counts->ci_pruned},
                     {"csi_pruned", r.counts->csi_pruned}};
    }
  }
  j["residual_threshold"] = r.residual_threshold;
  j["theorem_verified"] = r.theorem_verified;
  return j.dump(2) + "\n";
}

std::string format_sparsity(const FeatureCounts& c) {
  std::ostringstream out;
  out << "# cshc-report 1\n";
  out << "set          features  of-saturated\n";
  auto row = [&](const char* name, std::size_t n, double ratio) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%-12s %8zu  %s\n", name, n,
                  fixed(ratio, 4).c_str());
    out << buf;
  };
  row("saturated", c.saturated, c.saturated == 0 ? 0.0 : 1.0);
  row("ci-pruned", c.ci_pruned, c.ci_ratio());
  row("csi-pruned", c.csi_pruned, c.csi_ratio());
  out << "csi/ci " << fixed(c.csi_to_ci(), 4) << "\n";
  return out.str();
}

}  // namespace cshc::io
