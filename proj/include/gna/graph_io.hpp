#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gna/network.hpp"

namespace gna {

enum class SimilarityKind { evalue, bitscore };

struct SimEntry {
    std::string id1;
    std::string id2;
    double value;
};

// node-similarity table joining the two networks by external id
struct SimilarityTable {
    SimilarityKind kind = SimilarityKind::evalue;
    std::vector<SimEntry> entries;
};

// Parses the GML subset
//   graph [ node [ id INT label "STR" ] edge [ source INT target INT ] ]
// Unknown keys and nested blocks are skipped. The label, when present, becomes
// the node's external id; otherwise the stringified numeric id is used.
// Duplicate undirected edges are collapsed (one warning per duplicate).
Network parse_gml(std::string_view text, std::vector<std::string>* warnings = nullptr);

// Parses GraphML restricted to a single undirected graph. The node `id`
// attribute is the external id. edgedefault="directed" (or a directed edge)
// is rejected; duplicate edges are collapsed with a warning.
Network parse_graphml(std::string_view text, std::vector<std::string>* warnings = nullptr);

// Canonical GML: nodes in index order with id = index, edges sorted
// lexicographically. parse_gml(write_gml(n)) is structurally equal to n.
std::string write_gml(const Network& net);

// Rows are `id1<TAB>id2<TAB>value`; '#'-prefixed lines and blank lines are
// skipped. Rejects non-numeric or negative values and duplicate (id1,id2)
// pairs.
SimilarityTable parse_similarity_tsv(std::string_view text, SimilarityKind kind);

// Rows are `id<TAB>term`; repeated rows accumulate (multiset semantics).
std::vector<std::pair<std::string, std::string>> parse_annotations_tsv(std::string_view text);

// Attaches annotation multisets to nodes whose id resolves in `net`;
// unresolved ids are ignored (the same file may serve both networks).
void attach_annotations(Network& net,
                        const std::vector<std::pair<std::string, std::string>>& rows);

} // namespace gna
