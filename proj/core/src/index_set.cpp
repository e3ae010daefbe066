#include "groupoidkit/index_set.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "groupoidkit/error.hpp"

namespace groupoidkit {

Natural pair(const Natural& a, const Natural& b) {
  Natural s = a + b;
  Natural t = s * (s + 1);
  mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), 2);
  return t + b;
}

std::pair<Natural, Natural> unpair(const Natural& n) {
  if (n < 0) throw std::invalid_argument("unpair of a negative number");
  Natural d = 8 * n + 1;
  Natural r;
  mpz_sqrt(r.get_mpz_t(), d.get_mpz_t());
  Natural w = (r - 1) / 2;
  Natural t = w * (w + 1) / 2;
  Natural b = n - t;
  return {w - b, b};
}

Natural block_element(std::size_t i, const Natural& k) {
  if (i == 0) throw std::invalid_argument("blocks are numbered from 1");
  return pair(Natural(static_cast<unsigned long>(i - 1)), k);
}

std::size_t block_of(const Natural& n) {
  return unpair(n).first.get_ui() + 1;
}

// ---------------------------------------------------------------- patterns

IndexPattern IndexPattern::all() { return cofinite({}); }

IndexPattern IndexPattern::cofinite(std::vector<Natural> excluded) {
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  return IndexPattern(std::make_shared<const Node>(
      Node{Kind::cofinite, std::move(excluded), Natural(0), nullptr, nullptr}));
}

IndexPattern IndexPattern::point(Natural c) {
  return IndexPattern(
      std::make_shared<const Node>(Node{Kind::point, {}, std::move(c), nullptr, nullptr}));
}

IndexPattern IndexPattern::paired(const IndexPattern& left, const IndexPattern& right) {
  if (left.kind() == Kind::point && right.kind() == Kind::point) {
    return point(pair(left.value(), right.value()));
  }
  if (left.is_all() && right.is_all()) return all();
  return IndexPattern(std::make_shared<const Node>(
      Node{Kind::pair, {}, Natural(0), std::make_shared<const IndexPattern>(left),
           std::make_shared<const IndexPattern>(right)}));
}

IndexPattern IndexPattern::block(std::size_t i) {
  if (i == 0) throw std::invalid_argument("blocks are numbered from 1");
  return paired(point(Natural(static_cast<unsigned long>(i - 1))), all());
}

bool IndexPattern::contains(const Natural& n) const {
  switch (kind()) {
    case Kind::cofinite:
      return !std::binary_search(excluded().begin(), excluded().end(), n);
    case Kind::point:
      return value() == n;
    case Kind::pair: {
      auto [a, b] = unpair(n);
      return left().contains(a) && right().contains(b);
    }
  }
  return false;
}

std::optional<Natural> IndexPattern::as_point() const {
  if (kind() == Kind::point) return value();
  return std::nullopt;
}

Natural IndexPattern::sample() const {
  switch (kind()) {
    case Kind::cofinite: {
      Natural n = 0;
      for (const auto& x : excluded()) {
        if (x != n) break;
        ++n;
      }
      return n;
    }
    case Kind::point:
      return value();
    case Kind::pair:
      return pair(left().sample(), right().sample());
  }
  return 0;
}

bool IndexPattern::operator==(const IndexPattern& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::cofinite:
      return excluded() == o.excluded();
    case Kind::point:
      return value() == o.value();
    case Kind::pair:
      return left() == o.left() && right() == o.right();
  }
  return false;
}

bool IndexPattern::operator<(const IndexPattern& o) const {
  if (node_ == o.node_) return false;
  if (kind() != o.kind()) return kind() < o.kind();
  switch (kind()) {
    case Kind::cofinite:
      return excluded() < o.excluded();
    case Kind::point:
      return value() < o.value();
    case Kind::pair:
      if (!(left() == o.left())) return left() < o.left();
      return right() < o.right();
  }
  return false;
}

namespace {

using Kind = IndexPattern::Kind;

IndexSet remove_point(const IndexPattern& a, const Natural& c) {
  switch (a.kind()) {
    case Kind::cofinite: {
      if (!a.contains(c)) return {a};
      auto ex = a.excluded();
      ex.push_back(c);
      return {IndexPattern::cofinite(std::move(ex))};
    }
    case Kind::point:
      return a.value() == c ? IndexSet{} : IndexSet{a};
    case Kind::pair: {
      auto [x, y] = unpair(c);
      if (!a.left().contains(x) || !a.right().contains(y)) return {a};
      IndexSet out;
      for (const auto& l : remove_point(a.left(), x)) {
        out.push_back(IndexPattern::paired(l, a.right()));
      }
      for (const auto& r : remove_point(a.right(), y)) {
        out.push_back(IndexPattern::paired(IndexPattern::point(x), r));
      }
      return out;
    }
  }
  return {};
}

IndexSet remove_points(IndexSet s, const std::vector<Natural>& points) {
  for (const auto& c : points) {
    IndexSet next;
    for (const auto& p : s) {
      auto part = remove_point(p, c);
      next.insert(next.end(), part.begin(), part.end());
    }
    s = std::move(next);
  }
  return s;
}

}  // namespace

IndexSet intersect(const IndexPattern& a, const IndexPattern& b) {
  if (a.kind() == Kind::cofinite && b.kind() == Kind::cofinite) {
    auto ex = a.excluded();
    ex.insert(ex.end(), b.excluded().begin(), b.excluded().end());
    return {IndexPattern::cofinite(std::move(ex))};
  }
  if (a.kind() == Kind::cofinite) return remove_points({b}, a.excluded());
  if (b.kind() == Kind::cofinite) return remove_points({a}, b.excluded());
  if (a.kind() == Kind::point) return b.contains(a.value()) ? IndexSet{a} : IndexSet{};
  if (b.kind() == Kind::point) return a.contains(b.value()) ? IndexSet{b} : IndexSet{};
  IndexSet out;
  auto ls = intersect(a.left(), b.left());
  if (ls.empty()) return out;
  auto rs = intersect(a.right(), b.right());
  for (const auto& l : ls) {
    for (const auto& r : rs) out.push_back(IndexPattern::paired(l, r));
  }
  return out;
}

IndexSet subtract(const IndexPattern& a, const IndexPattern& b) {
  switch (b.kind()) {
    case Kind::cofinite: {
      IndexSet out;
      for (const auto& c : b.excluded()) {
        if (a.contains(c)) out.push_back(IndexPattern::point(c));
      }
      return out;
    }
    case Kind::point:
      return remove_point(a, b.value());
    case Kind::pair:
      break;
  }
  switch (a.kind()) {
    case Kind::point:
      return b.contains(a.value()) ? IndexSet{} : IndexSet{a};
    case Kind::cofinite: {
      // N = pair(N, N), so N \ pair(L, R) = pair(N \ L, N) + pair(L, N \ R).
      IndexSet out;
      const auto all = IndexPattern::all();
      for (const auto& l : subtract(all, b.left())) out.push_back(IndexPattern::paired(l, all));
      for (const auto& r : subtract(all, b.right())) {
        out.push_back(IndexPattern::paired(b.left(), r));
      }
      return remove_points(std::move(out), a.excluded());
    }
    case Kind::pair: {
      IndexSet out;
      for (const auto& l : subtract(a.left(), b.left())) {
        out.push_back(IndexPattern::paired(l, a.right()));
      }
      auto common = intersect(a.left(), b.left());
      if (common.empty()) return out;
      auto rest = subtract(a.right(), b.right());
      for (const auto& m : common) {
        for (const auto& r : rest) out.push_back(IndexPattern::paired(m, r));
      }
      return out;
    }
  }
  return {};
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      auto part = intersect(x, y);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  return out;
}

IndexSet subtract(const IndexSet& a, const IndexSet& b) {
  IndexSet cur = a;
  for (const auto& y : b) {
    IndexSet next;
    for (const auto& x : cur) {
      auto part = subtract(x, y);
      next.insert(next.end(), part.begin(), part.end());
    }
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return cur;
}

bool contains(const IndexSet& s, const Natural& n) {
  return std::any_of(s.begin(), s.end(), [&](const IndexPattern& p) { return p.contains(n); });
}

namespace {

bool subset_of(const IndexPattern& a, const IndexPattern& b) { return subtract(a, b).empty(); }

std::optional<IndexPattern> merge(const IndexPattern& a, const IndexPattern& b) {
  if (a == b) return a;
  if (a.kind() == Kind::cofinite && b.kind() == Kind::cofinite) {
    std::vector<Natural> common;
    std::set_intersection(a.excluded().begin(), a.excluded().end(), b.excluded().begin(),
                          b.excluded().end(), std::back_inserter(common));
    return IndexPattern::cofinite(std::move(common));
  }
  if (a.kind() == Kind::point && b.kind() == Kind::point) return std::nullopt;
  if (a.kind() == Kind::point) return merge(b, a);
  if (b.kind() == Kind::point) {
    if (a.contains(b.value())) return a;
    if (a.kind() == Kind::cofinite) {
      auto ex = a.excluded();
      ex.erase(std::find(ex.begin(), ex.end(), b.value()));
      return IndexPattern::cofinite(std::move(ex));
    }
    auto [x, y] = unpair(b.value());
    if (a.left().kind() == Kind::point && a.left().value() == x) {
      if (auto r = merge(a.right(), IndexPattern::point(y))) return IndexPattern::paired(a.left(), *r);
    }
    if (a.right().kind() == Kind::point && a.right().value() == y) {
      if (auto l = merge(a.left(), IndexPattern::point(x))) return IndexPattern::paired(*l, a.right());
    }
    return std::nullopt;
  }
  if (a.kind() == Kind::pair && b.kind() == Kind::pair) {
    if (a.left() == b.left()) {
      if (auto r = merge(a.right(), b.right())) return IndexPattern::paired(a.left(), *r);
    }
    if (a.right() == b.right()) {
      if (auto l = merge(a.left(), b.left())) return IndexPattern::paired(*l, a.right());
    }
  }
  if (subset_of(a, b)) return b;
  if (subset_of(b, a)) return a;
  return std::nullopt;
}

}  // namespace

IndexSet simplify(IndexSet s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < s.size() && !changed; ++j) {
        if (auto m = merge(s[i], s[j])) {
          s[i] = std::move(*m);
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  return s;
}

bool same_set(const IndexSet& a, const IndexSet& b) {
  return subtract(a, b).empty() && subtract(b, a).empty();
}

std::string to_string(const IndexPattern& p) {
  switch (p.kind()) {
    case Kind::cofinite: {
      if (p.excluded().empty()) return "*";
      std::string out = "*\\{";
      for (std::size_t i = 0; i < p.excluded().size(); ++i) {
        if (i) out += ",";
        out += p.excluded()[i].get_str();
      }
      return out + "}";
    }
    case Kind::point:
      return p.value().get_str();
    case Kind::pair:
      return "<" + to_string(p.left()) + "," + to_string(p.right()) + ">";
  }
  return "";
}

std::string to_string(const IndexSet& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += " + ";
    out += to_string(s[i]);
  }
  return out;
}

// ---------------------------------------------------------------- templates

IndexTemplate IndexTemplate::variable() {
  return IndexTemplate(
      std::make_shared<const Node>(Node{Kind::variable, Natural(0), nullptr, nullptr}));
}

IndexTemplate IndexTemplate::constant(Natural c) {
  return IndexTemplate(
      std::make_shared<const Node>(Node{Kind::constant, std::move(c), nullptr, nullptr}));
}

IndexTemplate IndexTemplate::paired(const IndexTemplate& left, const IndexTemplate& right) {
  if (left.has_variable() && right.has_variable()) {
    throw std::invalid_argument("index template may use its variable once");
  }
  if (left.node_->kind == Kind::constant && right.node_->kind == Kind::constant) {
    return constant(pair(left.node_->value, right.node_->value));
  }
  return IndexTemplate(std::make_shared<const Node>(
      Node{Kind::pair, Natural(0), std::make_shared<const IndexTemplate>(left),
           std::make_shared<const IndexTemplate>(right)}));
}

bool IndexTemplate::has_variable() const {
  switch (node_->kind) {
    case Kind::variable:
      return true;
    case Kind::constant:
      return false;
    case Kind::pair:
      return node_->left->has_variable() || node_->right->has_variable();
  }
  return false;
}

Natural IndexTemplate::apply(const Natural& k) const {
  switch (node_->kind) {
    case Kind::variable:
      return k;
    case Kind::constant:
      return node_->value;
    case Kind::pair:
      return pair(node_->left->apply(k), node_->right->apply(k));
  }
  return 0;
}

IndexPattern IndexTemplate::image(const IndexPattern& p) const {
  switch (node_->kind) {
    case Kind::variable:
      return p;
    case Kind::constant:
      return IndexPattern::point(node_->value);
    case Kind::pair:
      return IndexPattern::paired(node_->left->image(p), node_->right->image(p));
  }
  return p;
}

IndexSet IndexTemplate::preimage(const IndexPattern& p) const {
  switch (node_->kind) {
    case Kind::variable:
      return {p};
    case Kind::constant:
      return p.contains(node_->value) ? IndexSet{IndexPattern::all()} : IndexSet{};
    case Kind::pair:
      break;
  }
  switch (p.kind()) {
    case IndexPattern::Kind::point: {
      auto k = solve(p.value());
      if (!k) return {};
      if (!has_variable()) return {IndexPattern::all()};
      return {IndexPattern::point(*k)};
    }
    case IndexPattern::Kind::pair:
      return intersect(node_->left->preimage(p.left()), node_->right->preimage(p.right()));
    case IndexPattern::Kind::cofinite: {
      IndexSet out{IndexPattern::all()};
      for (const auto& c : p.excluded()) {
        out = subtract(out, preimage(IndexPattern::point(c)));
      }
      return out;
    }
  }
  return {};
}

IndexSet IndexTemplate::preimage(const IndexSet& s) const {
  IndexSet out;
  for (const auto& p : s) {
    auto part = preimage(p);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::optional<Natural> IndexTemplate::solve(const Natural& n) const {
  switch (node_->kind) {
    case Kind::variable:
      return n;
    case Kind::constant:
      if (n == node_->value) return Natural(0);
      return std::nullopt;
    case Kind::pair: {
      if (n < 0) return std::nullopt;
      auto [a, b] = unpair(n);
      auto l = node_->left->solve(a);
      if (!l) return std::nullopt;
      auto r = node_->right->solve(b);
      if (!r) return std::nullopt;
      return node_->left->has_variable() ? l : r;
    }
  }
  return std::nullopt;
}

bool IndexTemplate::operator==(const IndexTemplate& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::variable:
      return true;
    case Kind::constant:
      return node_->value == o.node_->value;
    case Kind::pair:
      return *node_->left == *o.node_->left && *node_->right == *o.node_->right;
  }
  return false;
}

std::string to_string(const IndexTemplate& t) {
  switch (t.node_->kind) {
    case IndexTemplate::Kind::variable:
      return "k";
    case IndexTemplate::Kind::constant:
      return t.node_->value.get_str();
    case IndexTemplate::Kind::pair:
      return "<" + to_string(*t.node_->left) + "," + to_string(*t.node_->right) + ">";
  }
  return "";
}

// ---------------------------------------------------------------- indexed sets

namespace {

std::vector<IndexedClopen::Piece> coalesce(std::vector<IndexedClopen::Piece> pieces) {
  std::vector<IndexedClopen::Piece> out;
  for (auto& p : pieces) {
    if (p.set.empty()) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const IndexedClopen::Piece& q) { return q.index == p.index; });
    if (it == out.end()) {
      out.push_back({p.set.normalized(), std::move(p.index)});
    } else {
      it->set = it->set | p.set;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size();) {
      std::optional<IndexPattern> m;
      if (out[i].set.atoms().size() == out[j].set.atoms().size() && out[i].set == out[j].set) {
        m = merge(out[i].index, out[j].index);
      }
      if (m) {
        out[i].index = std::move(*m);
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
        j = i + 1;
      } else {
        ++j;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

}  // namespace

IndexedClopen::IndexedClopen(GraphPtr g, std::vector<Piece> pieces) : graph_(std::move(g)) {
  for (const auto& p : pieces) {
    if (p.set.graph_ptr() != graph_) throw MixedGraphError();
  }
  pieces_ = coalesce(std::move(pieces));
}

IndexedClopen IndexedClopen::product(const ClopenSet& c, const IndexSet& s) {
  std::vector<Piece> pieces;
  for (const auto& p : s) pieces.push_back({c, p});
  return IndexedClopen(c.graph_ptr(), std::move(pieces));
}

bool IndexedClopen::empty() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.set.empty(); });
}

bool IndexedClopen::contains(const BoundaryPoint& x, const Natural& n) const {
  return std::any_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) {
    return p.index.contains(n) && p.set.contains(x);
  });
}

IndexedClopen IndexedClopen::operator|(const IndexedClopen& o) const {
  if (graph_ != o.graph_) throw MixedGraphError();
  auto pieces = pieces_;
  pieces.insert(pieces.end(), o.pieces_.begin(), o.pieces_.end());
  return IndexedClopen(graph_, std::move(pieces));
}

IndexedClopen IndexedClopen::operator&(const IndexedClopen& o) const {
  if (graph_ != o.graph_) throw MixedGraphError();
  std::vector<Piece> pieces;
  for (const auto& a : pieces_) {
    for (const auto& b : o.pieces_) {
      auto c = a.set & b.set;
      if (c.empty()) continue;
      for (auto& p : intersect(a.index, b.index)) pieces.push_back({c, std::move(p)});
    }
  }
  return IndexedClopen(graph_, std::move(pieces));
}

IndexedClopen IndexedClopen::operator-(const IndexedClopen& o) const {
  if (graph_ != o.graph_) throw MixedGraphError();
  // (C x P) \ (C' x P') = C x (P \ P')  +  (C \ C') x (P & P').
  std::vector<Piece> cur = pieces_;
  for (const auto& b : o.pieces_) {
    std::vector<Piece> next;
    for (const auto& a : cur) {
      auto common = a.set & b.set;
      if (common.empty()) {
        next.push_back(a);
        continue;
      }
      for (auto& p : subtract(a.index, b.index)) next.push_back({a.set, std::move(p)});
      auto rest = a.set - b.set;
      if (!rest.empty()) {
        for (auto& p : intersect(a.index, b.index)) next.push_back({rest, std::move(p)});
      }
    }
    cur = coalesce(std::move(next));
    if (cur.empty()) break;
  }
  return IndexedClopen(graph_, std::move(cur));
}

bool IndexedClopen::subset_of(const IndexedClopen& o) const { return (*this - o).empty(); }

bool IndexedClopen::disjoint_from(const IndexedClopen& o) const { return (*this & o).empty(); }

bool IndexedClopen::operator==(const IndexedClopen& o) const {
  return subset_of(o) && o.subset_of(*this);
}

IndexedClopen IndexedClopen::disjoint() const {
  IndexedClopen seen(graph_);
  std::vector<Piece> out;
  for (const auto& p : pieces_) {
    IndexedClopen one(graph_, {p});
    auto fresh = one - seen;
    out.insert(out.end(), fresh.pieces_.begin(), fresh.pieces_.end());
    seen = seen | one;
  }
  return IndexedClopen(graph_, std::move(out));
}

std::string to_string(const IndexedClopen& s) {
  if (s.pieces().empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < s.pieces().size(); ++i) {
    if (i) out += " + ";
    out += "(" + to_string(s.pieces()[i].set) + ") x " + to_string(s.pieces()[i].index);
  }
  return out;
}

IndexedClopen parse_indexed_clopen(GraphPtr g, std::string_view text) {
  std::vector<IndexedClopen::Piece> pieces;
  for (auto& p : parse_cylinders(*g, text)) {
    if (!p.index) throw ParseError(0, "atom without an index in an indexed clopen set");
    pieces.push_back({ClopenSet::from_atoms(g, {p.atom}), IndexPattern::point(*p.index)});
  }
  return IndexedClopen(std::move(g), std::move(pieces));
}

}  // namespace groupoidkit
