#include "cshc/independence.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "cshc/error.hpp"

namespace cshc {

namespace {

std::size_t pair_index(int n, VarIndex a, VarIndex b) {
  // a < b; pairs enumerated lexicographically.
  return static_cast<std::size_t>(a * (2 * n - a - 1) / 2 + (b - a - 1));
}

std::vector<VarSet> canonical_subsets(VarSet s) {
  std::vector<VarSet> subs = s.subsets();
  std::sort(subs.begin(), subs.end(),
            [](VarSet x, VarSet y) { return canonical_less(x, y); });
  return subs;
}

void validate(const DomainSchema& schema, VarIndex a, VarIndex b, VarSet cond,
              const Context& ctx) {
  const int n = schema.size();
  if (a < 0 || a >= n || b < 0 || b >= n || !schema.all().includes(cond) ||
      ctx.num_variables() != n) {
    throw Error(ErrorKind::kUnknownVariable,
                "triplet refers to variables outside the schema");
  }
  if (a == b || cond.contains(a) || cond.contains(b) ||
      !ctx.scope().disjoint(cond.with(a).with(b))) {
    throw Error(ErrorKind::kOverlappingSets,
                "a, b, U and W must be pairwise disjoint");
  }
}

// Lazily computed marginal masses keyed by variable set.
class MarginalCache {
 public:
  explicit MarginalCache(const JointTable& p) : p_(p) {}

  const std::vector<double>& masses(VarSet vars) {
    auto it = cache_.find(vars.bits());
    if (it == cache_.end()) {
      it = cache_.emplace(vars.bits(), marginal_masses(p_, vars)).first;
    }
    return it->second;
  }

  const JointTable& table() const { return p_; }

 private:
  const JointTable& p_;
  std::unordered_map<std::uint32_t, std::vector<double>> cache_;
};

// Product form of the (context-specific) independence test:
// p(a,b,u,w) p(u,w) = p(a,u,w) p(b,u,w) for every x_U with p(u,w) > 0.
bool csi_holds(MarginalCache& cache, VarIndex a, VarIndex b, VarSet cond,
               const Context& ctx, double tol) {
  const DomainSchema& schema = cache.table().schema();
  const VarSet scope = cond.with(a).with(b) | ctx.scope();
  const std::vector<double>& q = cache.masses(scope);
  const StateIndexer scope_index(schema, scope);
  const StateIndexer cond_index(schema, cond);
  const int ca = schema.cardinality(a);
  const int cb = schema.cardinality(b);
  std::vector<double> qa(static_cast<std::size_t>(ca));
  std::vector<double> qb(static_cast<std::size_t>(cb));
  std::vector<double> qab(static_cast<std::size_t>(ca * cb));
  Assignment x = ctx;
  for (std::size_t u = 0; u < cond_index.size(); ++u) {
    cond_index.decode(u, x);
    std::fill(qa.begin(), qa.end(), 0.0);
    std::fill(qb.begin(), qb.end(), 0.0);
    double quw = 0.0;
    for (int va = 0; va < ca; ++va) {
      x.set(a, va);
      for (int vb = 0; vb < cb; ++vb) {
        x.set(b, vb);
        const double v = q[scope_index.index(x)];
        qab[static_cast<std::size_t>(va * cb + vb)] = v;
        qa[static_cast<std::size_t>(va)] += v;
        qb[static_cast<std::size_t>(vb)] += v;
        quw += v;
      }
    }
    if (quw <= 0.0) continue;
    for (int va = 0; va < ca; ++va) {
      for (int vb = 0; vb < cb; ++vb) {
        const double joint = qab[static_cast<std::size_t>(va * cb + vb)];
        if (!nearly_equal(joint * quw, qa[va] * qb[vb], tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool nearly_equal(double x, double y, double tol) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return std::abs(x - y) <= tol * scale;
}

// --- Triplet ---------------------------------------------------------------

Triplet Triplet::make(VarIndex a, VarIndex b, VarSet cond, Context ctx) {
  if (a == b || cond.contains(a) || cond.contains(b) ||
      !ctx.scope().disjoint(cond.with(a).with(b))) {
    throw Error(ErrorKind::kOverlappingSets,
                "a, b, U and W must be pairwise disjoint");
  }
  if (a > b) std::swap(a, b);
  return Triplet{a, b, cond, std::move(ctx)};
}

Triplet Triplet::make(int num_variables, VarIndex a, VarIndex b,
                      VarSet cond) {
  return make(a, b, cond, Context(num_variables));
}

bool canonical_less(const Triplet& x, const Triplet& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.cond != y.cond) return canonical_less(x.cond, y.cond);
  return canonical_less(x.ctx, y.ctx);
}

// --- DependencyModel -------------------------------------------------------

DependencyModel::DependencyModel(std::vector<std::string> names,
                                 const Predicate& truth)
    : names_(std::move(names)) {
  const int n = size();
  if (n > kMaxVariables) {
    throw Error(ErrorKind::kCapExceeded,
                "dependency models are limited to 16 variables");
  }
  const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);
  truth_.assign(pairs << n, 0);
  for (VarIndex a = 0; a < n; ++a) {
    for (VarIndex b = a + 1; b < n; ++b) {
      const VarSet others = domain().without(a).without(b);
      for (VarSet cond : others.subsets()) {
        truth_[slot(a, b, cond)] = truth(a, b, cond) ? 1 : 0;
      }
    }
  }
}

DependencyModel DependencyModel::all_true(std::vector<std::string> names) {
  return DependencyModel(std::move(names),
                         [](VarIndex, VarIndex, VarSet) { return true; });
}

DependencyModel DependencyModel::all_false(std::vector<std::string> names) {
  return DependencyModel(std::move(names),
                         [](VarIndex, VarIndex, VarSet) { return false; });
}

std::size_t DependencyModel::slot(VarIndex a, VarIndex b, VarSet cond) const {
  const int n = size();
  if (a < 0 || b < 0 || a >= n || b >= n || !domain().includes(cond)) {
    throw Error(ErrorKind::kUnknownVariable,
                "triplet outside the model's domain");
  }
  if (a == b || cond.contains(a) || cond.contains(b)) {
    throw Error(ErrorKind::kOverlappingSets,
                "a, b and U must be pairwise disjoint");
  }
  if (a > b) std::swap(a, b);
  return (pair_index(n, a, b) << n) | cond.bits();
}

bool DependencyModel::holds(VarIndex a, VarIndex b, VarSet cond) const {
  return truth_[slot(a, b, cond)] != 0;
}

DependencyModel DependencyModel::with(VarIndex a, VarIndex b, VarSet cond,
                                      bool value) const {
  DependencyModel out = *this;
  out.truth_[slot(a, b, cond)] = value ? 1 : 0;
  return out;
}

void DependencyModel::for_each(
    const std::function<void(VarIndex, VarIndex, VarSet, bool)>& fn) const {
  const int n = size();
  for (VarIndex a = 0; a < n; ++a) {
    for (VarIndex b = a + 1; b < n; ++b) {
      for (VarSet cond : canonical_subsets(domain().without(a).without(b))) {
        fn(a, b, cond, holds(a, b, cond));
      }
    }
  }
}

std::size_t DependencyModel::count_true() const {
  std::size_t count = 0;
  for_each([&](VarIndex, VarIndex, VarSet, bool v) { count += v ? 1 : 0; });
  return count;
}

// --- CSIModel --------------------------------------------------------------

CSIModel::CSIModel(SchemaPtr schema, const Predicate& truth)
    : schema_(std::move(schema)) {
  const int n = schema_->size();
  std::size_t offset = 0;
  for (VarIndex a = 0; a < n; ++a) {
    for (VarIndex b = a + 1; b < n; ++b) {
      PairLayout layout;
      layout.offset = offset;
      std::size_t radix = 1;
      for (VarIndex v : schema_->all().without(a).without(b).members()) {
        layout.others.push_back(v);
        layout.radix.push_back(radix);
        // Per other variable: absent, in U, or bound in W to one value.
        radix *= static_cast<std::size_t>(schema_->cardinality(v) + 2);
      }
      offset += radix;
      pairs_.push_back(std::move(layout));
    }
  }
  truth_.assign(offset, 0);
  for_each([&](const Triplet& t, bool) {
    truth_[slot(t)] = truth(t) ? 1 : 0;
  });
}

CSIModel CSIModel::all_true(SchemaPtr schema) {
  return CSIModel(std::move(schema), [](const Triplet&) { return true; });
}

CSIModel CSIModel::all_false(SchemaPtr schema) {
  return CSIModel(std::move(schema), [](const Triplet&) { return false; });
}

const CSIModel::PairLayout& CSIModel::layout(VarIndex a, VarIndex b) const {
  return pairs_[pair_index(schema_->size(), a, b)];
}

std::size_t CSIModel::slot(const Triplet& t) const {
  validate(*schema_, t.a, t.b, t.cond, t.ctx);
  const VarIndex a = std::min(t.a, t.b);
  const VarIndex b = std::max(t.a, t.b);
  const PairLayout& pl = layout(a, b);
  std::size_t code = 0;
  for (std::size_t k = 0; k < pl.others.size(); ++k) {
    const VarIndex v = pl.others[k];
    std::size_t c = 0;
    if (t.cond.contains(v)) {
      c = 1;
    } else if (t.ctx.binds(v)) {
      c = 2 + static_cast<std::size_t>(t.ctx.value(v));
    }
    code += c * pl.radix[k];
  }
  return pl.offset + code;
}

bool CSIModel::holds(const Triplet& t) const { return truth_[slot(t)] != 0; }

CSIModel CSIModel::with(const Triplet& t, bool value) const {
  CSIModel out = *this;
  out.truth_[slot(t)] = value ? 1 : 0;
  return out;
}

void CSIModel::for_each(
    const std::function<void(const Triplet&, bool)>& fn) const {
  const int n = schema_->size();
  Triplet t;
  for (VarIndex a = 0; a < n; ++a) {
    for (VarIndex b = a + 1; b < n; ++b) {
      const VarSet others = schema_->all().without(a).without(b);
      for (VarSet cond : canonical_subsets(others)) {
        for (VarSet ctx_vars : canonical_subsets(others - cond)) {
          StateIndexer ctx_index(*schema_, ctx_vars);
          for (std::size_t i = 0; i < ctx_index.size(); ++i) {
            t.a = a;
            t.b = b;
            t.cond = cond;
            t.ctx = Context(n);
            ctx_index.decode(i, t.ctx);
            fn(t, truth_[slot(t)] != 0);
          }
        }
      }
    }
  }
}

std::vector<Triplet> CSIModel::true_triplets() const {
  std::vector<Triplet> out;
  for_each([&](const Triplet& t, bool v) {
    if (v) out.push_back(t);
  });
  return out;
}

std::size_t CSIModel::count_true() const {
  return static_cast<std::size_t>(
      std::count(truth_.begin(), truth_.end(), std::uint8_t{1}));
}

// --- tests -----------------------------------------------------------------

bool test_ci(const JointTable& p, VarIndex a, VarIndex b, VarSet cond,
             double tol) {
  return test_csi(p, a, b, cond, Context(p.schema().size()), tol);
}

bool test_csi(const JointTable& p, VarIndex a, VarIndex b, VarSet cond,
              const Context& ctx, double tol) {
  validate(p.schema(), a, b, cond, ctx);
  MarginalCache cache(p);
  return csi_holds(cache, a, b, cond, ctx, tol);
}

bool test_csi(const JointTable& p, const Triplet& t, double tol) {
  return test_csi(p, t.a, t.b, t.cond, t.ctx, tol);
}

bool test_ci(const JointTable& p, const std::string& a, const std::string& b,
             const std::vector<std::string>& cond, double tol) {
  const DomainSchema& s = p.schema();
  return test_ci(p, s.index_of(a), s.index_of(b), s.set_of(cond), tol);
}

CSIModel build_csi_model(const JointTable& p, double tol) {
  if (!is_positive(p)) {
    throw Error(ErrorKind::kNotPositive,
                "independence models are built from positive tables only");
  }
  MarginalCache cache(p);
  return CSIModel(p.schema_ptr(), [&](const Triplet& t) {
    return csi_holds(cache, t.a, t.b, t.cond, t.ctx, tol);
  });
}

DependencyModel reduce(const CSIModel& csi, const Context& ctx) {
  const DomainSchema& schema = csi.schema();
  if (ctx.num_variables() != schema.size()) {
    throw Error(ErrorKind::kUnknownVariable,
                "context does not belong to the model's schema");
  }
  const VarSet rest = schema.all() - ctx.scope();
  std::vector<std::string> names;
  for (VarIndex v : rest.members()) names.push_back(schema.name(v));
  const std::vector<VarIndex> global = rest.members();
  return DependencyModel(
      std::move(names), [&](VarIndex la, VarIndex lb, VarSet local_cond) {
        const VarSet cond = local_cond.expand(rest);
        const StateIndexer cond_index(schema, cond);
        Triplet t;
        t.a = global[static_cast<std::size_t>(la)];
        t.b = global[static_cast<std::size_t>(lb)];
        // Conjunction over every full assignment x_U, each joined to x_W.
        for (std::size_t i = 0; i < cond_index.size(); ++i) {
          t.ctx = ctx;
          cond_index.decode(i, t.ctx);
          if (!csi.holds(t)) return false;
        }
        return true;
      });
}

std::vector<ReducedModel> reduce_all(const CSIModel& csi) {
  return reduce_all(csi, csi.schema().all());
}

std::vector<ReducedModel> reduce_all(const CSIModel& csi, VarSet allowed) {
  const DomainSchema& schema = csi.schema();
  std::vector<ReducedModel> out;
  for (VarSet ctx_vars : canonical_subsets(allowed & schema.all())) {
    const StateIndexer ctx_index(schema, ctx_vars);
    for (std::size_t i = 0; i < ctx_index.size(); ++i) {
      Context ctx(schema.size());
      ctx_index.decode(i, ctx);
      DependencyModel model = reduce(csi, ctx);
      out.push_back(ReducedModel{std::move(ctx), std::move(model)});
    }
  }
  return out;
}

CSIModel lift(const DependencyModel& model, SchemaPtr schema) {
  if (model.size() != schema->size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "model and schema have different variables");
  }
  // position in schema -> position in model
  std::vector<VarIndex> to_model(static_cast<std::size_t>(schema->size()));
  for (VarIndex i = 0; i < model.size(); ++i) {
    to_model[static_cast<std::size_t>(schema->index_of(model.names()[i]))] =
        i;
  }
  auto map_set = [&](VarSet s) {
    VarSet out;
    for (VarIndex v : s.members()) out = out.with(to_model[v]);
    return out;
  };
  return CSIModel(std::move(schema), [&](const Triplet& t) {
    return model.holds(to_model[t.a], to_model[t.b],
                       map_set(t.cond | t.ctx.scope()));
  });
}

std::optional<Triplet> first_i_map_violation(const DependencyModel& model,
                                             const JointTable& p,
                                             double tol) {
  const DomainSchema& schema = p.schema();
  std::vector<VarIndex> to_table;
  for (const std::string& name : model.names()) {
    to_table.push_back(schema.index_of(name));
  }
  MarginalCache cache(p);
  const Context empty(schema.size());
  std::optional<Triplet> violation;
  model.for_each([&](VarIndex a, VarIndex b, VarSet cond, bool value) {
    if (!value || violation) return;
    VarSet mapped;
    for (VarIndex v : cond.members()) mapped = mapped.with(to_table[v]);
    const VarIndex ta = to_table[a];
    const VarIndex tb = to_table[b];
    if (!csi_holds(cache, ta, tb, mapped, empty, tol)) {
      violation = Triplet::make(ta, tb, mapped, empty);
    }
  });
  return violation;
}

bool is_i_map(const DependencyModel& model, const JointTable& p, double tol) {
  return !first_i_map_violation(model, p, tol).has_value();
}

std::optional<Triplet> first_csi_map_violation(const CSIModel& csi,
                                               const JointTable& p,
                                               double tol) {
  if (!(csi.schema() == p.schema())) {
    throw Error(ErrorKind::kInvalidArgument,
                "CSI model and table have different schemas");
  }
  MarginalCache cache(p);
  std::optional<Triplet> violation;
  csi.for_each([&](const Triplet& t, bool value) {
    if (!value || violation) return;
    if (!csi_holds(cache, t.a, t.b, t.cond, t.ctx, tol)) violation = t;
  });
  return violation;
}

bool is_csi_map(const CSIModel& csi, const JointTable& p, double tol) {
  return !first_csi_map_violation(csi, p, tol).has_value();
}

}  // namespace cshc
