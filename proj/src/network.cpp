#include "gna/network.hpp"

#include <algorithm>

#include "gna/errors.hpp"

namespace gna {

namespace {
std::uint64_t edge_key(int u, int v) {
    if (u > v)
        std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}
} // namespace

int Network::add_node(std::string id) {
    auto [it, inserted] = index_.emplace(id, node_count());
    if (!inserted)
        throw ConfigError("duplicate node id '" + id + "'");
    ids_.push_back(std::move(id));
    adj_.emplace_back();
    annotations_.emplace_back();
    sealed_ = false;
    return it->second;
}

bool Network::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count())
        throw ConfigError("edge endpoint out of range");
    if (u == v)
        throw ConfigError("self-loop at node '" + ids_[u] + "'");
    if (!edge_keys_.insert(edge_key(u, v)).second)
        return false;
    if (u > v)
        std::swap(u, v);
    edges_.emplace_back(u, v);
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    sealed_ = false;
    return true;
}

void Network::seal() {
    if (sealed_)
        return;
    for (auto& nbrs : adj_)
        std::sort(nbrs.begin(), nbrs.end());
    std::sort(edges_.begin(), edges_.end());
    sealed_ = true;
}

std::optional<int> Network::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

bool Network::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count() || u == v)
        return false;
    return edge_keys_.count(edge_key(u, v)) > 0;
}

void Network::set_annotations(int v, std::vector<std::string> terms) {
    std::sort(terms.begin(), terms.end());
    annotations_[v] = std::move(terms);
}

const std::vector<std::string>& Network::annotations(int v) const {
    return annotations_[v];
}

long Network::annotated_count() const {
    long n = 0;
    for (const auto& a : annotations_)
        if (!a.empty())
            ++n;
    return n;
}

} // namespace gna
