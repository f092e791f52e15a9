#include "cshc/domain.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "cshc/error.hpp"

namespace cshc {

VarSet::VarSet(std::initializer_list<VarIndex> members) {
  for (VarIndex v : members) bits_ |= 1u << v;
}

std::vector<VarIndex> VarSet::members() const {
  std::vector<VarIndex> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(std::countr_zero(b));
  }
  return out;
}

bool canonical_less(VarSet x, VarSet y) {
  if (x.size() != y.size()) return x.size() < y.size();
  // Same size: the set whose smallest differing member is smaller comes
  // first, which is lexicographic order on the sorted member lists.
  std::uint32_t diff = x.bits() ^ y.bits();
  if (diff == 0) return false;
  VarIndex lowest = std::countr_zero(diff);
  return x.contains(lowest);
}

std::vector<VarSet> VarSet::subsets() const {
  std::vector<VarSet> out;
  out.reserve(std::size_t{1} << size());
  // Standard submask walk, collected in increasing order.
  std::uint32_t sub = 0;
  while (true) {
    out.emplace_back(sub);
    if (sub == bits_) break;
    sub = (sub - bits_) & bits_;
  }
  return out;
}

VarSet VarSet::compress(VarSet universe) const {
  std::uint32_t out = 0;
  int pos = 0;
  for (VarIndex v : universe.members()) {
    if (contains(v)) out |= 1u << pos;
    ++pos;
  }
  return VarSet(out);
}

VarSet VarSet::expand(VarSet universe) const {
  std::uint32_t out = 0;
  int pos = 0;
  for (VarIndex v : universe.members()) {
    if (contains(pos)) out |= 1u << v;
    ++pos;
  }
  return VarSet(out);
}

DomainSchema::DomainSchema(std::vector<Variable> variables)
    : variables_(std::move(variables)) {
  if (variables_.size() > static_cast<std::size_t>(VarSet::kMaxVariables)) {
    throw Error(ErrorKind::kCapExceeded, "too many variables");
  }
  std::unordered_set<std::string> seen;
  for (const Variable& v : variables_) {
    if (v.name.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "empty variable name");
    }
    if (v.cardinality < 2) {
      throw Error(ErrorKind::kInvalidArgument,
                  "variable '" + v.name + "' needs cardinality >= 2");
    }
    if (!seen.insert(v.name).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "duplicate variable name '" + v.name + "'");
    }
    num_states_ *= static_cast<std::size_t>(v.cardinality);
    if (num_states_ > kMaxStates) {
      throw Error(ErrorKind::kCapExceeded,
                  "state space exceeds 2^24 states");
    }
  }
}

std::size_t DomainSchema::num_states(VarSet vars) const {
  std::size_t n = 1;
  for (VarIndex v : vars.members()) {
    n *= static_cast<std::size_t>(cardinality(v));
  }
  return n;
}

VarIndex DomainSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return static_cast<VarIndex>(i);
  }
  throw Error(ErrorKind::kUnknownVariable,
              "no variable named '" + std::string(name) + "'");
}

bool DomainSchema::has(std::string_view name) const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [&](const Variable& v) { return v.name == name; });
}

VarSet DomainSchema::set_of(std::span<const std::string> names) const {
  VarSet out;
  for (const std::string& n : names) out = out.with(index_of(n));
  return out;
}

std::shared_ptr<const DomainSchema> DomainSchema::restrict_to(
    VarSet vars) const {
  std::vector<Variable> kept;
  for (VarIndex v : vars.members()) kept.push_back(variable(v));
  return std::make_shared<const DomainSchema>(std::move(kept));
}

std::vector<VarIndex> DomainSchema::locate(const DomainSchema& sub) const {
  std::vector<VarIndex> out;
  out.reserve(static_cast<std::size_t>(sub.size()));
  for (const Variable& v : sub.variables()) out.push_back(index_of(v.name));
  return out;
}

std::string DomainSchema::format(VarSet vars) const {
  std::string out = "{";
  bool first = true;
  for (VarIndex v : vars.members()) {
    if (!first) out += ",";
    out += name(v);
    first = false;
  }
  return out + "}";
}

SchemaPtr make_schema(std::vector<Variable> variables) {
  return std::make_shared<const DomainSchema>(std::move(variables));
}

SchemaPtr make_binary_schema(std::span<const std::string> names) {
  std::vector<Variable> vars;
  for (const std::string& n : names) vars.push_back({n, 2});
  return make_schema(std::move(vars));
}

SchemaPtr make_binary_schema(std::initializer_list<const char*> names) {
  std::vector<Variable> vars;
  for (const char* n : names) vars.push_back({n, 2});
  return make_schema(std::move(vars));
}

Assignment::Assignment(std::vector<int> values) : values_(std::move(values)) {
  scope_ = VarSet::first(num_variables());
}

Assignment& Assignment::set(VarIndex v, int value) {
  values_.at(static_cast<std::size_t>(v)) = value;
  scope_ = scope_.with(v);
  return *this;
}

Assignment& Assignment::unset(VarIndex v) {
  values_.at(static_cast<std::size_t>(v)) = kUnbound;
  scope_ = scope_.without(v);
  return *this;
}

bool Assignment::consistent_with(const Assignment& other) const {
  for (VarIndex v : (scope_ & other.scope_).members()) {
    if (values_[v] != other.values_[v]) return false;
  }
  return true;
}

Assignment Assignment::merged(const Assignment& other) const {
  Assignment out = *this;
  for (VarIndex v : other.scope_.members()) out.set(v, other.values_[v]);
  return out;
}

bool canonical_less(const Assignment& x, const Assignment& y) {
  if (x.scope_ != y.scope_) return canonical_less(x.scope_, y.scope_);
  for (VarIndex v : x.scope_.members()) {
    if (x.values_[v] != y.values_[v]) return x.values_[v] < y.values_[v];
  }
  return false;
}

Context project(const Assignment& x, VarSet vars) {
  if (!x.scope().includes(vars)) {
    throw Error(ErrorKind::kUnknownVariable,
                "projection onto variables outside the assignment's scope");
  }
  Context out(x.num_variables());
  for (VarIndex v : vars.members()) out.set(v, x.value(v));
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Context parse_context(const DomainSchema& schema, std::string_view text) {
  Context ctx(schema.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find_first_of(", \t", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kBadContext,
                  "expected name=value, got '" + std::string(item) + "'");
    }
    std::string_view name = trim(item.substr(0, eq));
    std::string_view value_text = trim(item.substr(eq + 1));
    if (!schema.has(name)) {
      throw Error(ErrorKind::kBadContext,
                  "unknown variable '" + std::string(name) + "'");
    }
    VarIndex v = schema.index_of(name);
    int value = 0;
    auto [ptr, ec] = std::from_chars(
        value_text.data(), value_text.data() + value_text.size(), value);
    if (ec != std::errc() || ptr != value_text.data() + value_text.size() ||
        value < 0 || value >= schema.cardinality(v)) {
      throw Error(ErrorKind::kBadContext,
                  "bad value '" + std::string(value_text) + "' for '" +
                      std::string(name) + "'");
    }
    if (ctx.binds(v)) {
      throw Error(ErrorKind::kBadContext,
                  "variable '" + std::string(name) + "' bound twice");
    }
    ctx.set(v, value);
  }
  return ctx;
}

std::string format_context(const DomainSchema& schema, const Context& ctx) {
  std::string out;
  for (VarIndex v : ctx.scope().members()) {
    if (!out.empty()) out += ",";
    out += schema.name(v) + "=" + std::to_string(ctx.value(v));
  }
  return out;
}

StateIndexer::StateIndexer(const DomainSchema& schema, VarSet vars)
    : vars_(vars), num_variables_(schema.size()), members_(vars.members()) {
  cards_.reserve(members_.size());
  for (VarIndex v : members_) cards_.push_back(schema.cardinality(v));
  strides_.assign(members_.size(), 1);
  for (std::size_t k = members_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= static_cast<std::size_t>(cards_[k]);
  }
}

std::size_t StateIndexer::index(const Assignment& x) const {
  return index(x.values());
}

std::size_t StateIndexer::index(std::span<const int> full_values) const {
  std::size_t i = 0;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    i += strides_[k] * static_cast<std::size_t>(full_values[members_[k]]);
  }
  return i;
}

void StateIndexer::decode(std::size_t i, Assignment& out) const {
  for (std::size_t k = 0; k < members_.size(); ++k) {
    out.set(members_[k], static_cast<int>(i / strides_[k]));
    i %= strides_[k];
  }
}

std::vector<Assignment> StateIndexer::enumerate() const {
  std::vector<Assignment> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    Assignment x(num_variables_);
    decode(i, x);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace cshc
