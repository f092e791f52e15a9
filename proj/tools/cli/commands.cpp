#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>

#include "cshc/error.hpp"
#include "cshc/factorizer.hpp"
#include "cshc/io.hpp"
#include "cshc/testkit.hpp"

namespace cshc::cli {

namespace {

int exit_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotPositive:
    case ErrorKind::kPreconditionFailed:
    case ErrorKind::kNotGraphIsomorph:
      return kFailed;
    default:
      return kInputError;
  }
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

JointTable load(const std::string& path) {
  return normalize(io::read_distribution(path).table);
}

JointTable load_positive(const std::string& path) {
  JointTable p = load(path);
  if (!is_positive(p)) {
    throw Error(ErrorKind::kNotPositive,
                "positivity: the distribution has a zero entry");
  }
  return p;
}

VarSet parse_var_list(const DomainSchema& schema, std::string text) {
  if (text == "{}") text.clear();
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
    text = text.substr(1, text.size() - 2);
  }
  VarSet out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string name = text.substr(pos, end - pos);
    const auto first = name.find_first_not_of(" \t");
    if (first != std::string::npos) {
      name = name.substr(first, name.find_last_not_of(" \t") - first + 1);
      if (!schema.has(name)) {
        throw Error(ErrorKind::kBadContext,
                    "unknown context variable '" + name + "'");
      }
      out = out.with(schema.index_of(name));
    }
    pos = end + 1;
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParseError, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const Options& opt, const std::string& text,
                  std::ostream& out) {
  if (!opt.out) {
    out << text;
    return;
  }
  std::ofstream file(*opt.out, std::ios::binary);
  if (!file) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot write '" + *opt.out + "'");
  }
  file << text;
}

}  // namespace

int cmd_validate(const std::string& path, const Options& opt,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const io::DistributionFile file = io::read_distribution(path);
    const JointTable& p = file.table;
    const DomainSchema& schema = p.schema();
    out << "format: cshc-distribution " << file.version << "\n";
    if (!file.description.empty()) {
      out << "description: " << file.description << "\n";
    }
    if (file.seed) out << "seed: " << *file.seed << "\n";
    out << "variables: " << schema.size() << " (";
    for (VarIndex v = 0; v < schema.size(); ++v) {
      out << (v ? " " : "") << schema.name(v) << ":" << schema.cardinality(v);
    }
    out << ")\n";
    const double defect = std::abs(p.total() - 1.0);
    const bool normalized = defect <= opt.tol;
    const bool positive = is_positive(p);
    out << "states: " << p.size() << "\n";
    out << "normalization defect: " << defect << "\n";
    out << "min entry: " << p.min_entry() << "\n";
    if (p.total() <= 0.0) {
      throw Error(ErrorKind::kAllZero, "every entry is zero");
    }
    out << (positive ? "positive" : "not positive") << ", "
        << (normalized ? "normalized" : "not normalized") << ", " << p.size()
        << " states\n";
    if (!positive) {
      out << "warning: positivity=false; theorem preconditions unmet\n";
    }
    return kOk;
  });
}

int cmd_csis(const std::string& path, const Options& opt, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const JointTable p = load_positive(path);
    VarSet allowed = p.schema().all();
    if (!opt.context_vars.empty()) {
      allowed = VarSet();
      for (const std::string& w : opt.context_vars) {
        allowed = allowed | parse_var_list(p.schema(), w);
      }
    }
    write_output(opt, io::format_csi_listing(build_csi_model(p, opt.tol),
                                              allowed),
                 out);
    return kOk;
  });
}

int cmd_graph(const std::string& path, const Options& opt, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const JointTable p = load_positive(path);
    const Context ctx = parse_context(p.schema(), opt.context.value_or(""));
    const DependencyModel reduced = reduce(build_csi_model(p, opt.tol), ctx);
    write_output(opt,
                 io::format_graph(pairwise_graph(reduced),
                                  format_context(p.schema(), ctx)),
                 out);
    return kOk;
  });
}

int cmd_verify(const std::string& path, const Options& opt, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const JointTable p = load(path);
    const DomainSchema& schema = p.schema();
    VerifyOptions vo;
    vo.tol = opt.tol;
    vo.residual_threshold = opt.residual_threshold;
    vo.match_mode =
        opt.strict_matching ? MatchMode::kStrict : MatchMode::kConsistent;
    if (opt.features) {
      io::FeatureFile ff = io::read_features(*opt.features);
      if (!(*ff.schema == schema)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "feature file variables differ from the distribution's");
      }
      vo.features = std::move(ff.features);
    }
    // Without positivity the CSI model is still defined; the report names
    // the failed precondition.
    const CSIModel csi =
        opt.csi_model
            ? io::parse_csi_listing(p.schema_ptr(), read_text(*opt.csi_model))
            : CSIModel(p.schema_ptr(), [&](const Triplet& t) {
                return test_csi(p, t, opt.tol);
              });
    const TheoremReport report = verify_cshc(p, csi, vo);
    write_output(opt,
                 opt.json ? io::format_verify_json(schema, report)
                          : io::format_verify_text(schema, report),
                 out);
    if (!report.positivity) {
      err << "precondition failed: positivity\n";
    } else if (!report.csi_map) {
      err << "precondition failed: csi-map\n";
    } else if (!report.all_graph_isomorph) {
      err << "precondition failed: graph-isomorphism\n";
    } else if (!report.theorem_verified) {
      err << "verification failed\n";
    }
    return report.theorem_verified ? kOk : kFailed;
  });
}

int cmd_factorize(const std::string& path, const Options& opt,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const JointTable p = load_positive(path);
    const CSIModel csi = build_csi_model(p, opt.tol);
    FeatureSet features;
    if (opt.context_vars.empty()) {
      features = csi_pruned_features(
          p, csi, reduce_all(csi),
          opt.strict_matching ? MatchMode::kStrict : MatchMode::kConsistent);
    } else {
      std::vector<VarSet> family;
      for (const std::string& w : opt.context_vars) {
        family.push_back(parse_var_list(p.schema(), w));
      }
      features = factorize_csi(p, csi, family);
    }
    const FitResult fit = fit_restricted(p, features);
    write_output(opt, io::format_features(fit.model, fit.residual), out);
    if (opt.out) {
      out << "wrote " << features.size() << " features to " << *opt.out
          << " (residual " << io::format_residual(fit.residual) << ")\n";
    }
    return kOk;
  });
}

int cmd_report(const std::string& path, const Options& opt, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const JointTable p = load(path);
    const FeatureCounts counts =
        sparsity_report(p, build_csi_model(p, opt.tol), opt.tol);
    write_output(opt, io::format_sparsity(counts), out);
    return kOk;
  });
}

int cmd_fixture(const std::string& name, const Options& opt,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (name == "list") {
      for (const testkit::NamedTable& f : testkit::fixtures()) {
        out << f.name << "\n";
      }
      return kOk;
    }
    write_output(opt, io::format_distribution(testkit::fixture(name), name),
                 out);
    return kOk;
  });
}

}  // namespace cshc::cli
