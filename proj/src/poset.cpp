#include "netsheaf/poset.hpp"

#include <algorithm>

#include "netsheaf/errors.hpp"

namespace netsheaf {

namespace {

// Dedupe + sort element names, rejecting empties.
std::vector<std::string> normalize_elements(std::vector<std::string> elements) {
  for (const auto& e : elements)
    if (e.empty()) throw UnknownElement("poset element name is empty");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

}  // namespace

Poset::Poset(std::vector<std::string> elements,
             const std::vector<std::pair<std::string, std::string>>& relations) {
  names_ = normalize_elements(std::move(elements));
  for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = i;

  const std::size_t n = names_.size();
  leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = 1;
  for (const auto& [a, b] : relations) {
    auto ia = index_.find(a);
    auto ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end())
      throw UnknownElement("relation references unknown element: " + a + " <= " + b);
    leq_[ia->second * n + ib->second] = 1;
  }

  // Warshall closure; n stays small here.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!leq_[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (leq_[k * n + j]) leq_[i * n + j] = 1;
    }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq_[i * n + j] && leq_[j * n + i])
        throw CycleError("relation cycles through " + names_[i] + " and " +
                         names_[j]);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (leq_[i * n + j]) pairs_.emplace_back(i, j);

  // Covering pairs: a < b with nothing strictly between.
  for (const auto& [a, b] : pairs_) {
    if (a == b) continue;
    bool covered = true;
    for (std::size_t m = 0; m < n && covered; ++m) {
      if (m == a || m == b) continue;
      if (leq_[a * n + m] && leq_[m * n + b]) covered = false;
    }
    if (covered) hasse_.emplace_back(a, b);
  }
}

const std::string& Poset::name(std::size_t i) const {
  if (i >= names_.size()) throw IndexOutOfRange("poset element index out of range");
  return names_[i];
}

std::size_t Poset::index_of(const std::string& element) const {
  auto it = index_.find(element);
  if (it == index_.end())
    throw UnknownElement("unknown poset element: " + element);
  return it->second;
}

bool Poset::contains(const std::string& element) const {
  return index_.count(element) != 0;
}

bool Poset::leq(std::size_t a, std::size_t b) const {
  if (a >= names_.size() || b >= names_.size())
    throw IndexOutOfRange("poset element index out of range");
  return leq_[a * names_.size() + b] != 0;
}

bool Poset::leq(const std::string& a, const std::string& b) const {
  return leq(index_of(a), index_of(b));
}

std::vector<std::string> Poset::up_set(const std::string& x) const {
  const std::size_t i = index_of(x);
  std::vector<std::string> out;
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (leq_[i * names_.size() + j]) out.push_back(names_[j]);
  return out;  // names_ is sorted, so out is too
}

std::set<std::pair<std::string, std::string>> closure(
    const std::vector<std::string>& elements,
    const std::vector<std::pair<std::string, std::string>>& relations) {
  Poset p(elements, relations);
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : p.pairs()) out.emplace(p.name(a), p.name(b));
  return out;
}

std::string neighborhood_element(const std::string& v) { return "U:" + v; }
std::string vertex_element(const std::string& v) { return "v:" + v; }

FacePoset face_poset(const DirectedGraph& g) {
  std::vector<std::string> elements;
  std::map<std::string, FaceLabel> labels;
  for (const auto& v : g.vertices) {
    if (!g.has_edge(v, v))
      throw MissingSelfEdge("vertex lacks its self edge: " + v);
    elements.push_back(neighborhood_element(v));
    elements.push_back(vertex_element(v));
    labels[neighborhood_element(v)] = {FaceKind::Neighborhood, v};
    labels[vertex_element(v)] = {FaceKind::Vertex, v};
  }
  std::vector<std::pair<std::string, std::string>> rel;
  for (const auto& v : g.vertices)
    for (const auto& w : neighborhood(g, v))
      rel.emplace_back(neighborhood_element(v), vertex_element(w));
  return {Poset(std::move(elements), rel), std::move(labels)};
}

bool is_order_preserving(const Poset& source, const Poset& target,
                         const OrderMap& f) {
  auto image = [&](const std::string& e) -> const std::string& {
    auto it = f.map.find(e);
    if (it == f.map.end())
      throw UnknownElement("order map misses source element: " + e);
    if (!target.contains(it->second))
      throw UnknownElement("order map targets unknown element: " + it->second);
    return it->second;
  };
  for (const auto& [a, b] : source.pairs())
    if (!target.leq(image(source.name(a)), image(source.name(b)))) return false;
  return true;
}

}  // namespace netsheaf
