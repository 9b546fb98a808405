#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gna {

// A simple undirected graph with stable string ids and dense indices
// 0..n-1 assigned in insertion order. Self-loops and duplicate edges are
// rejected at insertion; adjacency and the edge list are kept sorted once
// seal() has run. Instances are treated as immutable after sealing and are
// safe to share across threads.
class Network {
public:
    Network() = default;

    // returns the new node's index; throws ConfigError on duplicate id
    int add_node(std::string id);

    // returns false if the edge was already present (caller may warn);
    // throws ConfigError on self-loops or out-of-range indices
    bool add_edge(int u, int v);

    // sorts adjacency lists and the edge list; idempotent
    void seal();

    int node_count() const { return static_cast<int>(ids_.size()); }
    long edge_count() const { return static_cast<long>(edges_.size()); }

    const std::string& id(int v) const { return ids_[v]; }
    const std::vector<std::string>& ids() const { return ids_; }
    std::optional<int> index_of(const std::string& id) const;

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int u, int v) const;

    // annotation multisets (sorted term vectors); empty = unannotated
    void set_annotations(int v, std::vector<std::string> terms);
    const std::vector<std::string>& annotations(int v) const;
    long annotated_count() const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_; // stored with first < second
    std::unordered_set<std::uint64_t> edge_keys_;
    std::vector<std::vector<std::string>> annotations_;
    bool sealed_ = false;
};

} // namespace gna
