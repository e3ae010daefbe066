#pragma once

// Normal-form machinery shared by cylinder sets and arrow sets. Both are
// finite unions of nodes of a forest in which every node's set is the
// disjoint union of its children's sets, and two nodes are either nested or
// disjoint. Traits supply parent(), children() and covers(a, b), the latter
// meaning a is an ancestor of b or equal to it.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace groupoidkit::detail {

template <class Node, class Traits>
std::vector<Node> forest_normalize(const Traits& t, std::vector<Node> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::set<Node> present(nodes.begin(), nodes.end());
  std::set<Node> kept;
  for (const auto& n : nodes) {
    bool covered = false;
    for (auto p = t.parent(n); p; p = t.parent(*p)) {
      if (present.contains(*p)) {
        covered = true;
        break;
      }
    }
    if (!covered) kept.insert(n);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Node, std::size_t> counts;
    for (const auto& n : kept) {
      if (auto p = t.parent(n)) ++counts[*p];
    }
    for (const auto& [p, count] : counts) {
      auto kids = t.children(p);
      if (count != kids.size()) continue;
      for (const auto& k : kids) kept.erase(k);
      kept.insert(p);
      changed = true;
    }
  }
  return {kept.begin(), kept.end()};
}

template <class Node, class Traits>
std::vector<Node> forest_intersect(const Traits& t, const std::vector<Node>& a,
                                   const std::vector<Node>& b) {
  std::vector<Node> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (t.covers(x, y)) {
        out.push_back(y);
      } else if (t.covers(y, x)) {
        out.push_back(x);
      }
    }
  }
  return forest_normalize(t, std::move(out));
}

template <class Node, class Traits>
void forest_carve(const Traits& t, const Node& node, const std::vector<Node>& holes,
                  std::vector<Node>& out) {
  if (holes.empty()) {
    out.push_back(node);
    return;
  }
  for (const auto& h : holes) {
    if (h == node) return;
  }
  for (const auto& child : t.children(node)) {
    std::vector<Node> inside;
    for (const auto& h : holes) {
      if (t.covers(child, h)) inside.push_back(h);
    }
    forest_carve(t, child, inside, out);
  }
}

template <class Node, class Traits>
std::vector<Node> forest_subtract(const Traits& t, const std::vector<Node>& a,
                                  const std::vector<Node>& b) {
  std::vector<Node> out;
  for (const auto& x : a) {
    bool gone = false;
    std::vector<Node> holes;
    for (const auto& y : b) {
      if (t.covers(y, x)) {
        gone = true;
        break;
      }
      if (t.covers(x, y)) holes.push_back(y);
    }
    if (!gone) forest_carve(t, x, holes, out);
  }
  return forest_normalize(t, std::move(out));
}

}  // namespace groupoidkit::detail
