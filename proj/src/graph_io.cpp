#include "gna/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gna/errors.hpp"

namespace gna {

namespace {

// ---------------------------------------------------------------- GML lexer

struct GmlToken {
    enum Kind { key, integer, real, string, lbracket, rbracket, eof } kind;
    std::string text;
    long long int_value = 0;
    int line = 0;
    int col = 0;
};

class GmlLexer {
public:
    explicit GmlLexer(std::string_view text) : text_(text) {}

    GmlToken next() {
        skip_space();
        GmlToken tok;
        tok.line = line_;
        tok.col = col_;
        if (pos_ >= text_.size()) {
            tok.kind = GmlToken::eof;
            return tok;
        }
        char c = text_[pos_];
        if (c == '[') {
            advance();
            tok.kind = GmlToken::lbracket;
            return tok;
        }
        if (c == ']') {
            advance();
            tok.kind = GmlToken::rbracket;
            return tok;
        }
        if (c == '"')
            return read_string(tok);
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c)))
            return read_number(tok);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return read_key(tok);
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') { // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    GmlToken read_string(GmlToken tok) {
        advance(); // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                advance();
                c = text_[pos_];
            }
            out.push_back(c);
            advance();
        }
        if (pos_ >= text_.size())
            throw ParseError("unterminated string", tok.line, tok.col);
        advance(); // closing quote
        tok.kind = GmlToken::string;
        tok.text = std::move(out);
        return tok;
    }

    GmlToken read_number(GmlToken tok) {
        size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+')
            advance();
        bool is_real = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '.' || c == 'e' || c == 'E' || c == '-' || c == '+') {
                // exponent signs only directly after e/E
                if ((c == '-' || c == '+') &&
                    !(text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))
                    break;
                is_real = true;
                advance();
            } else {
                break;
            }
        }
        std::string_view sv = text_.substr(start, pos_ - start);
        tok.text.assign(sv);
        if (is_real) {
            tok.kind = GmlToken::real;
            return tok;
        }
        auto res = std::from_chars(sv.data(), sv.data() + sv.size(), tok.int_value);
        if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
            throw ParseError("malformed number '" + tok.text + "'", tok.line, tok.col);
        tok.kind = GmlToken::integer;
        return tok;
    }

    GmlToken read_key(GmlToken tok) {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            advance();
        tok.kind = GmlToken::key;
        tok.text.assign(text_.substr(start, pos_ - start));
        return tok;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class GmlParser {
public:
    explicit GmlParser(std::string_view text, std::vector<std::string>* warnings)
        : lexer_(text), warnings_(warnings) {
        tok_ = lexer_.next();
    }

    Network parse() {
        expect_key("graph");
        expect(GmlToken::lbracket, "'['");
        parse_graph_body();
        expect(GmlToken::rbracket, "']'");
        // trailing content after the graph block is ignored
        return finish();
    }

private:
    struct RawNode {
        long long id;
        std::optional<std::string> label;
        int line;
    };
    struct RawEdge {
        long long source, target;
        int line;
    };

    void parse_graph_body() {
        while (tok_.kind == GmlToken::key) {
            std::string key = tok_.text;
            int line = tok_.line, col = tok_.col;
            next();
            if (key == "node") {
                parse_node(line);
            } else if (key == "edge") {
                parse_edge(line);
            } else if (key == "directed") {
                if (tok_.kind == GmlToken::integer && tok_.int_value != 0)
                    throw ParseError("directed graphs are not supported", line, col);
                skip_value();
            } else {
                skip_value();
            }
        }
    }

    void parse_node(int line) {
        expect(GmlToken::lbracket, "'[' after node");
        std::optional<long long> id;
        std::optional<std::string> label;
        while (tok_.kind == GmlToken::key) {
            std::string key = tok_.text;
            next();
            if (key == "id") {
                if (tok_.kind != GmlToken::integer)
                    throw ParseError("node id must be an integer", tok_.line, tok_.col);
                id = tok_.int_value;
                next();
            } else if (key == "label") {
                if (tok_.kind != GmlToken::string)
                    throw ParseError("node label must be a string", tok_.line, tok_.col);
                label = tok_.text;
                next();
            } else {
                skip_value();
            }
        }
        expect(GmlToken::rbracket, "']' after node");
        if (!id)
            throw ParseError("node without id", line);
        nodes_.push_back({*id, std::move(label), line});
    }

    void parse_edge(int line) {
        expect(GmlToken::lbracket, "'[' after edge");
        std::optional<long long> source, target;
        while (tok_.kind == GmlToken::key) {
            std::string key = tok_.text;
            next();
            if (key == "source" || key == "target") {
                if (tok_.kind != GmlToken::integer)
                    throw ParseError("edge " + key + " must be an integer", tok_.line, tok_.col);
                (key == "source" ? source : target) = tok_.int_value;
                next();
            } else {
                skip_value();
            }
        }
        expect(GmlToken::rbracket, "']' after edge");
        if (!source || !target)
            throw ParseError("edge without source/target", line);
        edges_.push_back({*source, *target, line});
    }

    // skips one scalar value or a balanced bracket block
    void skip_value() {
        if (tok_.kind == GmlToken::lbracket) {
            int depth = 0;
            do {
                if (tok_.kind == GmlToken::lbracket)
                    ++depth;
                else if (tok_.kind == GmlToken::rbracket)
                    --depth;
                else if (tok_.kind == GmlToken::eof)
                    throw ParseError("unbalanced '['", tok_.line, tok_.col);
                next();
            } while (depth > 0);
        } else if (tok_.kind == GmlToken::integer || tok_.kind == GmlToken::real ||
                   tok_.kind == GmlToken::string) {
            next();
        } else {
            throw ParseError("expected a value", tok_.line, tok_.col);
        }
    }

    Network finish() {
        Network net;
        std::unordered_map<long long, int> by_gml_id;
        for (const auto& n : nodes_) {
            if (by_gml_id.count(n.id))
                throw ParseError("duplicate node id " + std::to_string(n.id), n.line);
            std::string ext = n.label ? *n.label : std::to_string(n.id);
            int idx;
            try {
                idx = net.add_node(ext);
            } catch (const ConfigError& e) {
                throw ParseError(e.what(), n.line);
            }
            by_gml_id[n.id] = idx;
        }
        for (const auto& e : edges_) {
            auto su = by_gml_id.find(e.source);
            auto sv = by_gml_id.find(e.target);
            if (su == by_gml_id.end())
                throw ParseError("edge references undeclared node " + std::to_string(e.source),
                                 e.line);
            if (sv == by_gml_id.end())
                throw ParseError("edge references undeclared node " + std::to_string(e.target),
                                 e.line);
            if (su->second == sv->second)
                throw ParseError("self-loop on node " + std::to_string(e.source), e.line);
            if (!net.add_edge(su->second, sv->second) && warnings_)
                warnings_->push_back("duplicate edge (" + std::to_string(e.source) + "," +
                                     std::to_string(e.target) + ") collapsed");
        }
        net.seal();
        return net;
    }

    void next() { tok_ = lexer_.next(); }

    void expect(GmlToken::Kind kind, const char* what) {
        if (tok_.kind != kind)
            throw ParseError(std::string("expected ") + what, tok_.line, tok_.col);
        next();
    }

    void expect_key(const char* key) {
        if (tok_.kind != GmlToken::key || tok_.text != key)
            throw ParseError(std::string("expected '") + key + "'", tok_.line, tok_.col);
        next();
    }

    GmlLexer lexer_;
    GmlToken tok_;
    std::vector<std::string>* warnings_;
    std::vector<RawNode> nodes_;
    std::vector<RawEdge> edges_;
};

// ------------------------------------------------------- minimal XML reader
//
// Enough of XML for GraphML files: prolog, comments, CDATA-free elements,
// attributes with the five predefined entities. Anything fancier is a
// malformation error.

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlElement> children;
    int line = 0;

    const std::string* attr(const std::string& key) const {
        for (const auto& [k, v] : attrs)
            if (k == key)
                return &v;
        return nullptr;
    }
};

class XmlParser {
public:
    explicit XmlParser(std::string_view text) : text_(text) {}

    XmlElement parse_document() {
        skip_misc();
        XmlElement root = parse_element();
        skip_misc();
        if (pos_ < text_.size())
            throw ParseError("content after document element", line_);
        return root;
    }

private:
    void advance() {
        if (text_[pos_] == '\n')
            ++line_;
        ++pos_;
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void skip_until(std::string_view end, const char* what) {
        while (pos_ < text_.size() && !starts_with(end))
            advance();
        if (pos_ >= text_.size())
            throw ParseError(std::string("unterminated ") + what, line_);
        for (size_t i = 0; i < end.size(); ++i)
            advance();
    }

    // whitespace, comments, processing instructions, doctype
    void skip_misc() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!DOCTYPE")) {
                skip_until(">", "doctype");
            } else {
                break;
            }
        }
    }

    std::string read_name() {
        size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.' || c == ':')
                advance();
            else
                break;
        }
        if (pos_ == start)
            throw ParseError("expected a name", line_);
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            size_t semi = raw.find(';', i);
            if (semi == std::string_view::npos)
                throw ParseError("unterminated entity reference", line_);
            std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp")
                out.push_back('&');
            else if (ent == "lt")
                out.push_back('<');
            else if (ent == "gt")
                out.push_back('>');
            else if (ent == "quot")
                out.push_back('"');
            else if (ent == "apos")
                out.push_back('\'');
            else
                throw ParseError("unknown entity '&" + std::string(ent) + ";'", line_);
            i = semi;
        }
        return out;
    }

    XmlElement parse_element() {
        if (pos_ >= text_.size() || text_[pos_] != '<')
            throw ParseError("expected '<'", line_);
        advance();
        XmlElement el;
        el.line = line_;
        el.name = read_name();
        while (true) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                advance();
            if (pos_ >= text_.size())
                throw ParseError("unterminated element '" + el.name + "'", el.line);
            if (text_[pos_] == '>') {
                advance();
                parse_content(el);
                return el;
            }
            if (starts_with("/>")) {
                advance();
                advance();
                return el;
            }
            std::string key = read_name();
            if (pos_ >= text_.size() || text_[pos_] != '=')
                throw ParseError("expected '=' after attribute '" + key + "'", line_);
            advance();
            if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\''))
                throw ParseError("expected quoted attribute value", line_);
            char quote = text_[pos_];
            advance();
            size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != quote && text_[pos_] != '<')
                advance();
            if (pos_ >= text_.size() || text_[pos_] != quote)
                throw ParseError("unterminated attribute value", line_);
            std::string value = decode_entities(text_.substr(start, pos_ - start));
            advance();
            el.attrs.emplace_back(std::move(key), std::move(value));
        }
    }

    void parse_content(XmlElement& el) {
        while (true) {
            if (pos_ >= text_.size())
                throw ParseError("missing closing tag for '" + el.name + "'", el.line);
            char c = text_[pos_];
            if (c == '<') {
                if (starts_with("</")) {
                    advance();
                    advance();
                    std::string name = read_name();
                    if (name != el.name)
                        throw ParseError("mismatched closing tag '" + name + "' (expected '" +
                                             el.name + "')",
                                         line_);
                    while (pos_ < text_.size() &&
                           std::isspace(static_cast<unsigned char>(text_[pos_])))
                        advance();
                    if (pos_ >= text_.size() || text_[pos_] != '>')
                        throw ParseError("malformed closing tag", line_);
                    advance();
                    return;
                }
                if (starts_with("<!--")) {
                    skip_until("-->", "comment");
                    continue;
                }
                el.children.push_back(parse_element());
            } else {
                // text content (labels etc.) is not used by the graph model
                advance();
            }
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
};

} // namespace

// ------------------------------------------------------------------ parsers

Network parse_gml(std::string_view text, std::vector<std::string>* warnings) {
    GmlParser parser(text, warnings);
    return parser.parse();
}

Network parse_graphml(std::string_view text, std::vector<std::string>* warnings) {
    XmlParser xml(text);
    XmlElement root = xml.parse_document();
    if (root.name != "graphml")
        throw ParseError("root element is '" + root.name + "', expected 'graphml'", root.line);

    const XmlElement* graph = nullptr;
    for (const auto& child : root.children) {
        if (child.name == "graph") {
            if (graph)
                throw ParseError("multiple graph elements", child.line);
            graph = &child;
        }
        // <key> declarations and friends are ignored
    }
    if (!graph)
        throw ParseError("no graph element", root.line);

    if (const std::string* def = graph->attr("edgedefault"); def && *def == "directed")
        throw ParseError("directed graphs are not supported", graph->line);

    Network net;
    for (const auto& child : graph->children) {
        if (child.name != "node")
            continue;
        const std::string* id = child.attr("id");
        if (!id)
            throw ParseError("node without id attribute", child.line);
        try {
            net.add_node(*id);
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), child.line);
        }
    }
    for (const auto& child : graph->children) {
        if (child.name != "edge")
            continue;
        if (const std::string* dir = child.attr("directed"); dir && *dir == "true")
            throw ParseError("directed edges are not supported", child.line);
        const std::string* source = child.attr("source");
        const std::string* target = child.attr("target");
        if (!source || !target)
            throw ParseError("edge without source/target", child.line);
        auto u = net.index_of(*source);
        auto v = net.index_of(*target);
        if (!u)
            throw ParseError("edge references undeclared node '" + *source + "'", child.line);
        if (!v)
            throw ParseError("edge references undeclared node '" + *target + "'", child.line);
        if (*u == *v)
            throw ParseError("self-loop on node '" + *source + "'", child.line);
        if (!net.add_edge(*u, *v) && warnings)
            warnings->push_back("duplicate edge (" + *source + "," + *target + ") collapsed");
    }
    net.seal();
    return net;
}

std::string write_gml(const Network& net) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\')
                out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };
    std::ostringstream os;
    os << "graph [\n";
    for (int v = 0; v < net.node_count(); ++v) {
        os << "  node [\n"
           << "    id " << v << "\n"
           << "    label \"" << escape(net.id(v)) << "\"\n"
           << "  ]\n";
    }
    for (const auto& [u, v] : net.edges()) {
        os << "  edge [\n"
           << "    source " << u << "\n"
           << "    target " << v << "\n"
           << "  ]\n";
    }
    os << "]\n";
    return os.str();
}

namespace {

// splits into lines, handling trailing newline and \r\n
std::vector<std::pair<std::string_view, int>> data_lines(std::string_view text) {
    std::vector<std::pair<std::string_view, int>> out;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        std::string_view line = (end == std::string_view::npos) ? text.substr(pos)
                                                                : text.substr(pos, end - pos);
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!line.empty() && line.front() != '#')
            out.emplace_back(line, lineno);
        if (end == std::string_view::npos)
            break;
        pos = end + 1;
    }
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (true) {
        size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

} // namespace

SimilarityTable parse_similarity_tsv(std::string_view text, SimilarityKind kind) {
    SimilarityTable table;
    table.kind = kind;
    std::unordered_set<std::string> seen;
    for (auto [line, lineno] : data_lines(text)) {
        auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw ParseError("expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        std::string id1(fields[0]), id2(fields[1]);
        double value;
        auto res = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), value);
        if (res.ec != std::errc() || res.ptr != fields[2].data() + fields[2].size())
            throw ParseError("non-numeric value '" + std::string(fields[2]) + "'", lineno);
        if (!std::isfinite(value))
            throw ParseError("non-finite value", lineno);
        if (value < 0)
            throw ParseError("negative similarity value", lineno);
        if (!seen.insert(id1 + "\t" + id2).second)
            throw ParseError("duplicate pair (" + id1 + "," + id2 + ")", lineno);
        table.entries.push_back({std::move(id1), std::move(id2), value});
    }
    return table;
}

std::vector<std::pair<std::string, std::string>> parse_annotations_tsv(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (auto [line, lineno] : data_lines(text)) {
        auto fields = split_tabs(line);
        if (fields.size() != 2)
            throw ParseError("expected 2 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        rows.emplace_back(std::string(fields[0]), std::string(fields[1]));
    }
    return rows;
}

void attach_annotations(Network& net,
                        const std::vector<std::pair<std::string, std::string>>& rows) {
    std::vector<std::vector<std::string>> terms(net.node_count());
    bool any = false;
    for (const auto& [id, term] : rows) {
        if (auto v = net.index_of(id)) {
            terms[*v].push_back(term);
            any = true;
        }
    }
    if (!any)
        return;
    for (int v = 0; v < net.node_count(); ++v)
        if (!terms[v].empty())
            net.set_annotations(v, std::move(terms[v]));
}

} // namespace gna
