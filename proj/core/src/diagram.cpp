#include "tanglekit/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tanglekit {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Rotate clockwise at a crossing: the face-tracing step.
std::uint32_t rot_cw(std::uint32_t h) { return (h & ~3u) | ((h + 3) & 3u); }

struct MapCore {
    std::vector<CrossingRec> crossings;     // slot -> edge id
    std::vector<std::uint32_t> mate;        // half-edge pairing
    std::vector<std::int32_t> face_of;
    int face_count = 0;
    std::vector<std::int32_t> piece;        // crossing -> connected piece
    int piece_count = 0;
};

// Derives crossing records and the half-edge pairing from an edge list in
// which every port is a crossing slot.  Checks 4-valence.
MapCore build_core(std::size_t n, const std::vector<EdgeRec>& edges) {
    MapCore core;
    core.crossings.assign(n, CrossingRec{});
    std::vector<std::uint8_t> seen(4 * n, 0);
    core.mate.assign(4 * n, 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const PortRef ends[2] = {edges[e].a, edges[e].b};
        for (const PortRef& p : ends) {
            if (p.is_corner()) fail("corner endpoint in a closed diagram");
            if (static_cast<std::size_t>(p.crossing) >= n || p.slot < 0 || p.slot > 3)
                fail("edge endpoint out of range");
            std::uint32_t h = half_edge(p.crossing, p.slot);
            if (seen[h]) fail("half-edge used by two edges (crossing " +
                              std::to_string(p.crossing) + ", slot " + std::to_string(p.slot) + ")");
            seen[h] = 1;
            core.crossings[p.crossing].edge[p.slot] = static_cast<std::uint32_t>(e);
        }
        std::uint32_t ha = half_edge(ends[0].crossing, ends[0].slot);
        std::uint32_t hb = half_edge(ends[1].crossing, ends[1].slot);
        core.mate[ha] = hb;
        core.mate[hb] = ha;
    }
    for (std::uint32_t h = 0; h < 4 * n; ++h)
        if (!seen[h])
            fail("crossing " + std::to_string(h / 4) + " slot " + std::to_string(h % 4) +
                 " has no edge (dangling)");
    return core;
}

void trace_faces(MapCore& core) {
    const std::size_t nh = core.mate.size();
    core.face_of.assign(nh, -1);
    core.face_count = 0;
    for (std::uint32_t h0 = 0; h0 < nh; ++h0) {
        if (core.face_of[h0] >= 0) continue;
        std::uint32_t h = h0;
        do {
            core.face_of[h] = core.face_count;
            h = rot_cw(core.mate[h]);
        } while (h != h0);
        ++core.face_count;
    }
}

void find_pieces(MapCore& core) {
    const std::size_t n = core.crossings.size();
    core.piece.assign(n, -1);
    core.piece_count = 0;
    for (std::size_t c0 = 0; c0 < n; ++c0) {
        if (core.piece[c0] >= 0) continue;
        std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(c0)};
        core.piece[c0] = core.piece_count;
        while (!stack.empty()) {
            std::uint32_t c = stack.back();
            stack.pop_back();
            for (int s = 0; s < 4; ++s) {
                std::uint32_t d = he_crossing(core.mate[half_edge(c, s)]);
                if (core.piece[d] < 0) {
                    core.piece[d] = core.piece[c];
                    stack.push_back(d);
                }
            }
        }
        ++core.piece_count;
    }
}

// V - E + F = 2 on every connected piece, else the rotation system does
// not embed in the sphere.
void euler_check(const MapCore& core, std::size_t edge_count) {
    if (core.crossings.empty()) return;
    std::vector<int> v(core.piece_count, 0), e(core.piece_count, 0), f(core.piece_count, 0);
    for (std::size_t c = 0; c < core.crossings.size(); ++c) v[core.piece[c]]++;
    (void)edge_count;
    for (std::uint32_t h = 0; h < core.mate.size(); ++h)
        if (h < core.mate[h]) e[core.piece[h / 4]]++;
    std::vector<std::int32_t> face_piece(core.face_count, -1);
    for (std::uint32_t h = 0; h < core.mate.size(); ++h)
        face_piece[core.face_of[h]] = core.piece[h / 4];
    for (int fp : face_piece) f[fp]++;
    for (int p = 0; p < core.piece_count; ++p) {
        if (v[p] - e[p] + f[p] != 2) {
            std::uint32_t witness = 0;
            for (std::size_t c = 0; c < core.crossings.size(); ++c)
                if (core.piece[c] == p) { witness = static_cast<std::uint32_t>(c); break; }
            fail("non-spherical rotation system: piece containing crossing " +
                 std::to_string(witness) + " has V-E+F = " +
                 std::to_string(v[p] - e[p] + f[p]));
        }
    }
}

// Strand orbits: next arrival = mate of the opposite slot.  Orbits come in
// direction-reversed pairs covering all half-edges.
std::vector<std::int32_t> strand_orbits(const std::vector<std::uint32_t>& mate, int& orbit_count) {
    const std::size_t nh = mate.size();
    std::vector<std::int32_t> orbit(nh, -1);
    orbit_count = 0;
    for (std::uint32_t h0 = 0; h0 < nh; ++h0) {
        if (orbit[h0] >= 0) continue;
        std::uint32_t h = h0;
        do {
            orbit[h] = orbit_count;
            h = mate[he_opposite(h)];
        } while (h != h0);
        ++orbit_count;
    }
    return orbit;
}

// Chooses a direction for every strand (majority vote of the incoming
// under-strand claims) and rotates crossings by two slots where needed so
// the chosen direction arrives on the under-strand at slot 0.  Mutates
// `edges` in place.
void orient_rotations(const MapCore& core, std::vector<EdgeRec>& edges) {
    int orbit_count = 0;
    std::vector<std::int32_t> orbit = strand_orbits(core.mate, orbit_count);
    std::vector<std::int32_t> rev(orbit_count, -1);
    for (std::uint32_t h = 0; h < core.mate.size(); ++h)
        rev[orbit[h]] = orbit[he_opposite(h)];
    std::vector<int> votes(orbit_count, 0);
    for (std::size_t c = 0; c < core.crossings.size(); ++c)
        votes[orbit[half_edge(static_cast<std::uint32_t>(c), 0)]]++;
    std::vector<std::int8_t> chosen(orbit_count, -1);
    for (std::uint32_t h = 0; h < core.mate.size(); ++h) {
        std::int32_t o = orbit[h];
        if (chosen[o] >= 0) continue;
        std::int32_t r = rev[o];
        if (votes[o] >= votes[r]) { chosen[o] = 1; chosen[r] = 0; }
        else { chosen[o] = 0; chosen[r] = 1; }
    }
    std::vector<int> rot(core.crossings.size(), 0);
    for (std::size_t c = 0; c < core.crossings.size(); ++c)
        rot[c] = chosen[orbit[half_edge(static_cast<std::uint32_t>(c), 0)]] == 1 ? 0 : 2;
    for (EdgeRec& e : edges) {
        if (!e.a.is_corner()) e.a.slot = (e.a.slot + rot[e.a.crossing]) & 3;
        if (!e.b.is_corner()) e.b.slot = (e.b.slot + rot[e.b.crossing]) & 3;
    }
}

}  // namespace

const char* corner_name(Corner c) {
    switch (c) {
        case Corner::NW: return "NW";
        case Corner::NE: return "NE";
        case Corner::SE: return "SE";
        case Corner::SW: return "SW";
    }
    return "?";
}

LinkDiagram LinkDiagram::from_parts(std::size_t crossing_count,
                                    std::vector<EdgeRec> edges, int free_loops) {
    if (free_loops < 0) fail("negative free loop count");
    if (edges.size() != 2 * crossing_count)
        fail("edge count " + std::to_string(edges.size()) + " does not match " +
             std::to_string(crossing_count) + " crossings");
    {
        MapCore pre = build_core(crossing_count, edges);
        orient_rotations(pre, edges);
    }
    MapCore core = build_core(crossing_count, edges);
    find_pieces(core);
    trace_faces(core);
    euler_check(core, edges.size());

    LinkDiagram d;
    d.crossings_ = std::move(core.crossings);
    d.edges_ = std::move(edges);
    d.free_loops_ = free_loops;
    d.mate_ = std::move(core.mate);
    d.face_of_ = std::move(core.face_of);
    d.face_count_ = core.face_count;
    d.crossing_piece_ = std::move(core.piece);
    d.piece_count_ = core.piece_count;

    // Arrival flags: after normalization every slot-0 half-edge is an
    // arrival, which fixes the direction of every strand that goes under
    // somewhere; strands that only pass over get the first orbit.
    int orbit_count = 0;
    std::vector<std::int32_t> orbit = strand_orbits(d.mate_, orbit_count);
    std::vector<std::int32_t> rev(orbit_count, -1);
    for (std::uint32_t h = 0; h < d.mate_.size(); ++h)
        rev[orbit[h]] = orbit[he_opposite(h)];
    std::vector<std::int8_t> chosen(orbit_count, -1);
    for (std::uint32_t c = 0; c < crossing_count; ++c) {
        std::int32_t o = orbit[half_edge(c, 0)];
        chosen[o] = 1;
        chosen[rev[o]] = 0;
    }
    for (std::uint32_t h = 0; h < d.mate_.size(); ++h) {
        std::int32_t o = orbit[h];
        if (chosen[o] < 0) { chosen[o] = 1; chosen[rev[o]] = 0; }
    }
    d.arrival_.assign(d.mate_.size(), 0);
    for (std::uint32_t h = 0; h < d.mate_.size(); ++h) d.arrival_[h] = chosen[orbit[h]] == 1;

    // Component labels along oriented strands.
    d.edge_component_.assign(d.edges_.size(), -1);
    int comp = 0;
    for (std::uint32_t h0 = 0; h0 < d.mate_.size(); ++h0) {
        if (!d.arrival_[h0]) continue;
        if (d.edge_component_[d.edge_at(h0)] >= 0) continue;
        std::uint32_t h = h0;
        do {
            d.edge_component_[d.edge_at(h)] = comp;
            h = d.mate_[he_opposite(h)];
        } while (h != h0);
        ++comp;
    }
    d.component_count_ = comp + free_loops;
    return d;
}

int LinkDiagram::crossing_sign(std::uint32_t c) const {
    return arrival_[half_edge(c, 3)] ? 1 : -1;
}

int LinkDiagram::writhe() const {
    int w = 0;
    for (std::uint32_t c = 0; c < crossings_.size(); ++c) w += crossing_sign(c);
    return w;
}

TangleDiagram TangleDiagram::from_parts(std::size_t crossing_count,
                                        std::vector<EdgeRec> edges, int free_loops) {
    if (edges.size() * 2 != 4 * crossing_count + 4)
        fail("tangle edge count does not match crossing count");
    // Collapse the square boundary to a virtual 4-valent vertex whose
    // counterclockwise rotation is (NW, NE, SE, SW), then run the sphere
    // validation on the collapsed map.
    const std::int32_t v = static_cast<std::int32_t>(crossing_count);
    {
        std::vector<EdgeRec> collapsed = edges;
        int corner_seen[4] = {0, 0, 0, 0};
        for (EdgeRec& e : collapsed) {
            for (PortRef* p : {&e.a, &e.b}) {
                if (p->is_corner()) {
                    corner_seen[p->slot]++;
                    *p = PortRef::at(v, p->slot);
                }
            }
        }
        for (int k = 0; k < 4; ++k)
            if (corner_seen[k] != 1)
                fail(std::string("corner ") + corner_name(static_cast<Corner>(k)) +
                     " attached to " + std::to_string(corner_seen[k]) + " edges");
        MapCore core = build_core(crossing_count + 1, collapsed);
        find_pieces(core);
        trace_faces(core);
        try {
            euler_check(core, collapsed.size());
        } catch (const std::invalid_argument&) {
            fail("tangle does not embed with corners in planar order NW, NE, SE, SW");
        }
    }

    TangleDiagram t;
    t.free_loops_ = free_loops;
    t.corner_edge_ = {UINT32_MAX, UINT32_MAX, UINT32_MAX, UINT32_MAX};
    if (crossing_count == 0) {
        t.edges_ = std::move(edges);
        for (std::size_t e = 0; e < t.edges_.size(); ++e)
            for (const PortRef* p : {&t.edges_[e].a, &t.edges_[e].b})
                if (p->is_corner()) t.corner_edge_[p->slot] = static_cast<std::uint32_t>(e);
        return t;
    }

    // Partial mate over crossing slots; corner-attached ends are loose.
    auto build_mate = [&](const std::vector<EdgeRec>& es) {
        std::vector<std::uint32_t> mate(4 * crossing_count, UINT32_MAX);
        for (const EdgeRec& ed : es) {
            if (ed.a.is_corner() || ed.b.is_corner()) continue;
            std::uint32_t ha = half_edge(ed.a.crossing, ed.a.slot);
            std::uint32_t hb = half_edge(ed.b.crossing, ed.b.slot);
            mate[ha] = hb;
            mate[hb] = ha;
        }
        return mate;
    };

    // Orient: walk each strand once per direction (open strands start at a
    // corner, circles anywhere), vote with the slot-0 claims, and rotate
    // crossings so the chosen direction arrives under at slot 0.
    {
        std::vector<std::uint32_t> mate = build_mate(edges);
        std::vector<std::int32_t> orbit(4 * crossing_count, -1);
        int orbit_count = 0;
        auto walk = [&](std::uint32_t h0) {
            std::uint32_t h = h0;
            while (orbit[h] < 0) {
                orbit[h] = orbit_count;
                std::uint32_t dep = he_opposite(h);
                if (mate[dep] == UINT32_MAX) break;
                h = mate[dep];
            }
            ++orbit_count;
        };
        for (const EdgeRec& e : edges) {
            // Corner-attached edges seed the open-strand walks.
            for (const PortRef* p : {&e.a, &e.b}) {
                if (!p->is_corner()) continue;
                const PortRef& far = p == &e.a ? e.b : e.a;
                if (far.is_corner()) continue;
                std::uint32_t h = half_edge(far.crossing, far.slot);
                if (orbit[h] < 0) walk(h);
            }
        }
        for (std::uint32_t h = 0; h < 4 * crossing_count; ++h)
            if (orbit[h] < 0) walk(h);
        std::vector<std::int32_t> rev(orbit_count, -1);
        for (std::uint32_t h = 0; h < 4 * crossing_count; ++h)
            if (rev[orbit[h]] < 0) rev[orbit[h]] = orbit[he_opposite(h)];
        std::vector<int> votes(orbit_count, 0);
        for (std::uint32_t c = 0; c < crossing_count; ++c)
            votes[orbit[half_edge(c, 0)]]++;
        std::vector<std::int8_t> chosen(orbit_count, -1);
        for (std::uint32_t h = 0; h < 4 * crossing_count; ++h) {
            std::int32_t o = orbit[h];
            if (chosen[o] >= 0) continue;
            std::int32_t r = rev[o];
            if (o == r) { chosen[o] = 1; continue; }
            if (votes[o] >= votes[r]) { chosen[o] = 1; chosen[r] = 0; }
            else { chosen[o] = 0; chosen[r] = 1; }
        }
        std::vector<int> rot(crossing_count, 0);
        for (std::uint32_t c = 0; c < crossing_count; ++c)
            rot[c] = chosen[orbit[half_edge(c, 0)]] == 1 ? 0 : 2;
        for (EdgeRec& e : edges)
            for (PortRef* p : {&e.a, &e.b})
                if (!p->is_corner()) p->slot = (p->slot + rot[p->crossing]) & 3;
    }

    t.crossings_.assign(crossing_count, CrossingRec{});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (const PortRef* p : {&edges[e].a, &edges[e].b}) {
            if (p->is_corner()) t.corner_edge_[p->slot] = static_cast<std::uint32_t>(e);
            else t.crossings_[p->crossing].edge[p->slot] = static_cast<std::uint32_t>(e);
        }
    }
    t.edges_ = std::move(edges);
    return t;
}

// --- text formats -----------------------------------------------------------

namespace {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    bool comment = false;
    for (char ch : text) {
        if (ch == '\n') comment = false;
        if (comment) continue;
        if (ch == '#') { comment = true; continue; }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

long parse_label(const std::string& tok, const std::string& context) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value <= 0)
        fail("bad edge label '" + tok + "' in " + context);
    return value;
}

std::vector<long> parse_x_token(const std::string& tok) {
    if (tok.size() < 4 || (tok[0] != 'X' && tok[0] != 'x') || tok[1] != '(' || tok.back() != ')')
        fail("malformed crossing tuple '" + tok + "'");
    std::vector<long> labels;
    std::string inner = tok.substr(2, tok.size() - 3);
    std::string field;
    std::stringstream ss(inner);
    while (std::getline(ss, field, ',')) labels.push_back(parse_label(field, tok));
    if (labels.size() != 4) fail("malformed crossing tuple '" + tok + "': expected 4 labels");
    return labels;
}

struct LabelledParts {
    std::size_t crossing_count = 0;
    int free_loops = 0;
    std::map<long, std::vector<PortRef>> occurrences;
};

LabelledParts scan_pd_tokens(const std::vector<std::string>& tokens, std::size_t stop) {
    LabelledParts parts;
    for (std::size_t i = 0; i < stop; ++i) {
        const std::string& tok = tokens[i];
        if (tok == "O" || tok == "o") { parts.free_loops++; continue; }
        std::vector<long> labels = parse_x_token(tok);
        std::int32_t c = static_cast<std::int32_t>(parts.crossing_count++);
        for (int s = 0; s < 4; ++s) parts.occurrences[labels[s]].push_back(PortRef::at(c, s));
    }
    return parts;
}

std::vector<EdgeRec> edges_from_occurrences(const std::map<long, std::vector<PortRef>>& occ) {
    std::vector<EdgeRec> edges;
    for (const auto& [label, ports] : occ) {
        if (ports.size() != 2)
            fail("edge label " + std::to_string(label) + " appears " +
                 std::to_string(ports.size()) + " times (must be exactly 2)");
        edges.push_back(EdgeRec{ports[0], ports[1]});
    }
    return edges;
}

}  // namespace

LinkDiagram parse_pd(std::string_view text) {
    std::vector<std::string> tokens = tokenize(text);
    LabelledParts parts = scan_pd_tokens(tokens, tokens.size());
    return LinkDiagram::from_parts(parts.crossing_count,
                                   edges_from_occurrences(parts.occurrences),
                                   parts.free_loops);
}

std::string emit_pd(const LinkDiagram& d) {
    // Number edges sequentially along each oriented component.
    std::vector<long> label(d.edge_count(), 0);
    long next = 1;
    std::vector<std::uint8_t> done(4 * d.crossing_count(), 0);
    for (std::uint32_t h0 = 0; h0 < 4 * d.crossing_count(); ++h0) {
        if (!d.arrival(h0) || done[h0]) continue;
        std::uint32_t h = h0;
        do {
            done[h] = 1;
            label[d.edge_at(h)] = next++;
            h = d.mate(he_opposite(h));
        } while (h != h0);
    }
    std::ostringstream out;
    for (std::uint32_t c = 0; c < d.crossing_count(); ++c) {
        if (c) out << ' ';
        out << "X(";
        for (int s = 0; s < 4; ++s) {
            if (s) out << ',';
            out << label[d.crossings()[c].edge[s]];
        }
        out << ')';
    }
    for (int i = 0; i < d.free_loops(); ++i) {
        if (d.crossing_count() || i) out << ' ';
        out << 'O';
    }
    return out.str();
}

TangleDiagram parse_tangle(std::string_view text) {
    std::vector<std::string> tokens = tokenize(text);
    std::map<std::string, long> corners;
    std::size_t body_end = tokens.size();
    const std::vector<std::string> corner_keys = {"NW", "NE", "SE", "SW"};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq);
        if (std::find(corner_keys.begin(), corner_keys.end(), key) == corner_keys.end())
            fail("unknown corner '" + key + "' in tangle text");
        if (corners.count(key)) fail("duplicate corner label " + key);
        corners[key] = parse_label(tok.substr(eq + 1), tok);
        body_end = std::min(body_end, i);
    }
    for (const std::string& key : corner_keys)
        if (!corners.count(key)) fail("missing corner label " + key);
    LabelledParts parts = scan_pd_tokens(tokens, body_end);
    for (int k = 0; k < 4; ++k)
        parts.occurrences[corners[corner_keys[k]]].push_back(
            PortRef::corner(static_cast<Corner>(k)));
    return TangleDiagram::from_parts(parts.crossing_count,
                                     edges_from_occurrences(parts.occurrences),
                                     parts.free_loops);
}

std::string emit_tangle(const TangleDiagram& t) {
    std::vector<long> label(t.edges().size(), 0);
    long next = 1;
    const std::size_t nh = 4 * t.crossing_count();
    std::vector<std::uint32_t> mate(nh, UINT32_MAX);
    std::vector<std::int32_t> port_edge(nh, -1);
    for (std::size_t e = 0; e < t.edges().size(); ++e) {
        const EdgeRec& ed = t.edges()[e];
        for (const PortRef* p : {&ed.a, &ed.b})
            if (!p->is_corner())
                port_edge[half_edge(p->crossing, p->slot)] = static_cast<std::int32_t>(e);
        if (!ed.a.is_corner() && !ed.b.is_corner()) {
            std::uint32_t ha = half_edge(ed.a.crossing, ed.a.slot);
            std::uint32_t hb = half_edge(ed.b.crossing, ed.b.slot);
            mate[ha] = hb;
            mate[hb] = ha;
        }
    }
    auto walk_from_edge = [&](std::uint32_t e0, PortRef into) {
        if (label[e0]) return;
        label[e0] = next++;
        if (into.is_corner()) return;
        std::uint32_t h = half_edge(into.crossing, into.slot);
        while (true) {
            std::uint32_t dep = he_opposite(h);
            std::uint32_t e = port_edge[dep];
            if (label[e]) break;
            label[e] = next++;
            if (mate[dep] == UINT32_MAX) break;
            h = mate[dep];
        }
    };
    for (int k = 0; k < 4; ++k) {
        std::uint32_t e0 = t.corner_edge(static_cast<Corner>(k));
        const EdgeRec& ed = t.edges()[e0];
        PortRef far = (ed.a.is_corner() && ed.a.slot == k) ? ed.b : ed.a;
        walk_from_edge(e0, far);
    }
    for (std::size_t e = 0; e < t.edges().size(); ++e)
        if (!label[e]) walk_from_edge(static_cast<std::uint32_t>(e), t.edges()[e].b);
    std::ostringstream out;
    for (std::uint32_t c = 0; c < t.crossing_count(); ++c) {
        if (c) out << ' ';
        out << "X(";
        for (int s = 0; s < 4; ++s) {
            if (s) out << ',';
            out << label[t.crossings()[c].edge[s]];
        }
        out << ')';
    }
    for (int i = 0; i < t.free_loops(); ++i) {
        if (t.crossing_count() || i) out << ' ';
        out << 'O';
    }
    if (t.crossing_count() || t.free_loops()) out << ' ';
    out << "NW=" << label[t.corner_edge(Corner::NW)] << " NE=" << label[t.corner_edge(Corner::NE)]
        << " SE=" << label[t.corner_edge(Corner::SE)] << " SW=" << label[t.corner_edge(Corner::SW)];
    return out.str();
}

// --- closures, sums, belts --------------------------------------------------

namespace {

// Ports with crossing <= -1000 are fusion joints.  resolve() welds bonded
// joint pairs, turning chains into plain edges and pure joint cycles into
// free loops.  bond_home reports, per bond, the edge id (or -(loop+1))
// that absorbed it.  Joints without a bond are left in place.
struct Fusion {
    std::vector<EdgeRec> edges;
    int free_loops = 0;

    std::vector<EdgeRec> out_edges;
    std::vector<std::int32_t> bond_home;

    static std::int64_t key(const PortRef& p) { return std::int64_t(p.crossing) * 8 + p.slot; }

    void resolve(const std::vector<std::pair<PortRef, PortRef>>& bonds) {
        std::map<std::int64_t, std::pair<std::size_t, int>> joint_edge;
        std::map<std::int64_t, std::pair<std::int64_t, std::size_t>> joint_bond;
        for (std::size_t b = 0; b < bonds.size(); ++b) {
            joint_bond[key(bonds[b].first)] = {key(bonds[b].second), b};
            joint_bond[key(bonds[b].second)] = {key(bonds[b].first), b};
        }
        auto bonded = [&](const PortRef& p) {
            return p.crossing <= -1000 && joint_bond.count(key(p)) > 0;
        };
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (bonded(edges[e].a)) joint_edge[key(edges[e].a)] = {e, 0};
            if (bonded(edges[e].b)) joint_edge[key(edges[e].b)] = {e, 1};
        }
        bond_home.assign(bonds.size(), 0);
        std::vector<std::uint8_t> edge_done(edges.size(), 0);

        // Follow bonds from a bonded port until a terminal port; returns the
        // terminal and the bonds consumed.
        auto chase = [&](PortRef start) {
            PortRef cur = start;
            std::vector<std::size_t> bonds_seen;
            while (true) {
                auto bid = joint_bond.find(key(cur));
                bonds_seen.push_back(bid->second.second);
                auto je = joint_edge.find(bid->second.first);
                if (je == joint_edge.end()) fail("fusion bond attached to nothing");
                std::size_t e = je->second.first;
                edge_done[e] = 1;
                PortRef far = je->second.second == 0 ? edges[e].b : edges[e].a;
                if (!bonded(far)) return std::make_pair(far, bonds_seen);
                cur = far;
            }
        };

        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (edge_done[e]) continue;
            bool a_bonded = bonded(edges[e].a);
            bool b_bonded = bonded(edges[e].b);
            if (a_bonded && b_bonded) continue;  // chain interior or loop; handled below
            edge_done[e] = 1;
            if (!a_bonded && !b_bonded) {
                out_edges.push_back(edges[e]);
                continue;
            }
            PortRef fixed = a_bonded ? edges[e].b : edges[e].a;
            auto [far, bonds_seen] = chase(a_bonded ? edges[e].a : edges[e].b);
            std::int32_t id = static_cast<std::int32_t>(out_edges.size());
            out_edges.push_back(EdgeRec{fixed, far});
            for (std::size_t b : bonds_seen) bond_home[b] = id;
        }
        // Anything left is a cycle of bonded joints: a free loop.
        for (std::size_t e0 = 0; e0 < edges.size(); ++e0) {
            if (edge_done[e0]) continue;
            std::int32_t loop_id = -(free_loops + 1);
            std::size_t cur = e0;
            int end = 0;  // leave via this end next
            while (!edge_done[cur] || cur != e0 || end != 0) {
                if (edge_done[cur] && cur == e0 && end == 0) break;
                edge_done[cur] = 1;
                PortRef p = end == 0 ? edges[cur].a : edges[cur].b;
                auto bid = joint_bond.find(key(p));
                bond_home[bid->second.second] = loop_id;
                auto je = joint_edge.find(bid->second.first);
                cur = je->second.first;
                end = 1 - je->second.second;
                if (cur == e0 && end == 0) break;
            }
            ++free_loops;
        }
    }
};

PortRef joint_port(int group, Corner c) {
    return PortRef{-1000 - group * 4 - static_cast<std::int32_t>(c), 0};
}

void append_tangle(Fusion& fusion, const TangleDiagram& t, int group,
                   std::uint32_t crossing_offset) {
    for (const EdgeRec& e : t.edges()) {
        EdgeRec copy = e;
        for (PortRef* p : {&copy.a, &copy.b}) {
            if (p->is_corner())
                *p = joint_port(group, static_cast<Corner>(p->slot));
            else
                p->crossing += static_cast<std::int32_t>(crossing_offset);
        }
        fusion.edges.push_back(copy);
    }
    fusion.free_loops += t.free_loops();
}

LinkDiagram close_tangle(const TangleDiagram& t, Corner a1, Corner a2, Corner b1, Corner b2,
                         std::int32_t* arc1 = nullptr, std::int32_t* arc2 = nullptr) {
    Fusion fusion;
    append_tangle(fusion, t, 0, 0);
    std::vector<std::pair<PortRef, PortRef>> bonds = {
        {joint_port(0, a1), joint_port(0, a2)},
        {joint_port(0, b1), joint_port(0, b2)},
    };
    fusion.resolve(bonds);
    if (arc1) *arc1 = fusion.bond_home[0];
    if (arc2) *arc2 = fusion.bond_home[1];
    return LinkDiagram::from_parts(t.crossing_count(), fusion.out_edges, fusion.free_loops);
}

}  // namespace

LinkDiagram numerator_closure(const TangleDiagram& t) {
    return close_tangle(t, Corner::NW, Corner::NE, Corner::SW, Corner::SE);
}

LinkDiagram denominator_closure(const TangleDiagram& t) {
    return close_tangle(t, Corner::NW, Corner::SW, Corner::NE, Corner::SE);
}

TangleDiagram concat_tangles(const std::vector<TangleDiagram>& tangles) {
    if (tangles.empty()) fail("empty tangle list");
    Fusion fusion;
    std::uint32_t offset = 0;
    std::vector<std::pair<PortRef, PortRef>> bonds;
    for (std::size_t i = 0; i < tangles.size(); ++i) {
        append_tangle(fusion, tangles[i], static_cast<int>(i), offset);
        offset += static_cast<std::uint32_t>(tangles[i].crossing_count());
        if (i + 1 < tangles.size()) {
            bonds.push_back({joint_port(static_cast<int>(i), Corner::NE),
                             joint_port(static_cast<int>(i + 1), Corner::NW)});
            bonds.push_back({joint_port(static_cast<int>(i), Corner::SE),
                             joint_port(static_cast<int>(i + 1), Corner::SW)});
        }
    }
    fusion.resolve(bonds);
    const int last = static_cast<int>(tangles.size()) - 1;
    for (EdgeRec& e : fusion.out_edges) {
        for (PortRef* p : {&e.a, &e.b}) {
            if (*p == joint_port(0, Corner::NW)) *p = PortRef::corner(Corner::NW);
            else if (*p == joint_port(0, Corner::SW)) *p = PortRef::corner(Corner::SW);
            else if (*p == joint_port(last, Corner::NE)) *p = PortRef::corner(Corner::NE);
            else if (*p == joint_port(last, Corner::SE)) *p = PortRef::corner(Corner::SE);
        }
    }
    return TangleDiagram::from_parts(offset, fusion.out_edges, fusion.free_loops);
}

ConwaySum conway_sum(const std::vector<TangleDiagram>& tangles) {
    if (tangles.empty()) fail("conway_sum of an empty list");
    ConwaySum sum;
    sum.tangles = tangles;
    TangleDiagram composite = concat_tangles(tangles);
    sum.diagram = numerator_closure(composite);
    std::uint32_t offset = 0;
    for (const TangleDiagram& t : tangles) {
        std::vector<std::uint32_t> ids(t.crossing_count());
        std::iota(ids.begin(), ids.end(), offset);
        offset += static_cast<std::uint32_t>(t.crossing_count());
        sum.crossing_ids.push_back(std::move(ids));
    }
    return sum;
}

LinkDiagram add_belt(const TangleDiagram& t) {
    std::int32_t arc_n = 0, arc_s = 0;
    LinkDiagram closed = close_tangle(t, Corner::NW, Corner::NE, Corner::SW, Corner::SE,
                                      &arc_n, &arc_s);
    // Four belt crossings: b1 = arcN west, b2 = arcS west, b3 = arcS east,
    // b4 = arcN east.  The belt passes over at b1, b2 and under at b3, b4.
    const std::uint32_t n = static_cast<std::uint32_t>(closed.crossing_count());
    const std::int32_t b1 = n, b2 = n + 1, b3 = n + 2, b4 = n + 3;
    std::vector<EdgeRec> edges = closed.edges();
    int free_loops = closed.free_loops();

    // West crossings (belt over): slots ccw from east: 0=e, 1=n, 2=w, 3=s.
    // East crossings (belt under): slots ccw from north: 0=n, 1=w, 2=s, 3=e.
    // Returns the id of the wrap edge when the arc was a free loop.
    auto splice_arc = [&](std::int32_t arc, std::int32_t west, std::int32_t east) {
        std::int32_t wrap = -1;
        if (arc >= 0) {
            EdgeRec old = edges[arc];
            edges[arc] = EdgeRec{old.a, PortRef::at(west, 2)};
            edges.push_back(EdgeRec{PortRef::at(east, 3), old.b});
        } else {
            free_loops--;
            wrap = static_cast<std::int32_t>(edges.size());
            edges.push_back(EdgeRec{PortRef::at(east, 3), PortRef::at(west, 2)});
        }
        edges.push_back(EdgeRec{PortRef::at(west, 0), PortRef::at(east, 1)});
        return wrap;
    };
    std::int32_t wrap_n = splice_arc(arc_n, b1, b4);
    if (arc_s < 0 && arc_s == arc_n) arc_s = wrap_n;  // both gates on one circle
    splice_arc(arc_s, b2, b3);
    // Belt strand: top (b4.n - b1.n), west (b1.s - b2.n), bottom (b2.s - b3.s),
    // east (b3.n - b4.s).
    std::uint32_t belt_top = static_cast<std::uint32_t>(edges.size());
    edges.push_back(EdgeRec{PortRef::at(b4, 0), PortRef::at(b1, 1)});
    edges.push_back(EdgeRec{PortRef::at(b1, 3), PortRef::at(b2, 1)});
    edges.push_back(EdgeRec{PortRef::at(b2, 3), PortRef::at(b3, 2)});
    edges.push_back(EdgeRec{PortRef::at(b3, 0), PortRef::at(b4, 2)});

    LinkDiagram belted = LinkDiagram::from_parts(n + 4, edges, free_loops);
    BeltInfo info;
    info.belt_crossings = {static_cast<std::uint32_t>(b1), static_cast<std::uint32_t>(b2),
                           static_cast<std::uint32_t>(b3), static_cast<std::uint32_t>(b4)};
    info.belt_component = belted.component_of_edge(belt_top);
    belted.set_belt(info);
    return belted;
}

LinkDiagram twist_fill(const LinkDiagram& belted, int n) {
    if (!belted.belt()) fail("twist_fill: input lacks belt marking");
    const BeltInfo& info = *belted.belt();
    const int belt_comp = info.belt_component;
    std::set<std::uint32_t> belt_set(info.belt_crossings.begin(), info.belt_crossings.end());

    // Remove the belt: drop its edges and crossings; strand edges through a
    // belt crossing are rejoined across it (slot k to slot k+2).
    Fusion fusion;
    fusion.free_loops = belted.free_loops();
    std::map<std::uint32_t, std::uint32_t> renumber;
    std::uint32_t next_id = 0;
    for (std::uint32_t c = 0; c < belted.crossing_count(); ++c)
        if (!belt_set.count(c)) renumber[c] = next_id++;
    auto belt_joint = [](std::uint32_t crossing, int slot) {
        return PortRef{-1000 - static_cast<std::int32_t>(crossing) * 4 - slot, 0};
    };
    for (std::size_t e = 0; e < belted.edges().size(); ++e) {
        if (belted.component_of_edge(static_cast<std::uint32_t>(e)) == belt_comp) continue;
        EdgeRec copy = belted.edges()[e];
        for (PortRef* p : {&copy.a, &copy.b}) {
            if (belt_set.count(static_cast<std::uint32_t>(p->crossing)))
                *p = belt_joint(p->crossing, p->slot);
            else
                p->crossing = static_cast<std::int32_t>(renumber[p->crossing]);
        }
        fusion.edges.push_back(copy);
    }
    std::vector<std::pair<PortRef, PortRef>> bonds;
    int gate_bond[2] = {-1, -1};  // bonds at b1 (arcN) and b2 (arcS)
    for (std::uint32_t bc : info.belt_crossings) {
        int arc_slots[2] = {-1, -1};
        int found = 0;
        for (int s = 0; s < 4; ++s) {
            std::uint32_t edge = belted.crossings()[bc].edge[s];
            if (belted.component_of_edge(edge) != belt_comp && found < 2) arc_slots[found++] = s;
        }
        if (found != 2 || ((arc_slots[0] + 2) & 3) != arc_slots[1])
            fail("twist_fill: belt crossing structure corrupted");
        bonds.push_back({belt_joint(bc, arc_slots[0]), belt_joint(bc, arc_slots[1])});
        if (bc == info.belt_crossings[0]) gate_bond[0] = static_cast<int>(bonds.size()) - 1;
        if (bc == info.belt_crossings[1]) gate_bond[1] = static_cast<int>(bonds.size()) - 1;
    }
    fusion.resolve(bonds);
    std::int32_t arc_n = fusion.bond_home[gate_bond[0]];
    std::int32_t arc_s = fusion.bond_home[gate_bond[1]];

    std::vector<EdgeRec> edges = std::move(fusion.out_edges);
    int free_loops = fusion.free_loops;
    const std::uint32_t base = next_id;
    if (n == 0) return LinkDiagram::from_parts(base, edges, free_loops);

    // Insert a ladder of 2|n| crossings between the two gate arcs.  The
    // n > 0 rung puts the top-west/bottom-east diagonal under.
    const int m = 2 * std::abs(n);
    const int wt = n > 0 ? 0 : 3, wb = n > 0 ? 1 : 0, eb = n > 0 ? 2 : 1, et = n > 0 ? 3 : 2;
    auto rung = [&](int k) { return static_cast<std::int32_t>(base + k); };
    auto cut = [&](std::int32_t arc, PortRef first, PortRef last) -> std::int32_t {
        if (arc >= 0) {
            EdgeRec old = edges[arc];
            edges[arc] = EdgeRec{old.a, first};
            edges.push_back(EdgeRec{last, old.b});
            return -1;
        }
        free_loops--;
        std::int32_t wrap = static_cast<std::int32_t>(edges.size());
        edges.push_back(EdgeRec{last, first});
        return wrap;
    };
    std::int32_t wrap = cut(arc_n, PortRef::at(rung(0), wt), PortRef::at(rung(m - 1), et));
    if (arc_s < 0 && arc_s == arc_n) arc_s = wrap;  // both gates on one circle
    cut(arc_s, PortRef::at(rung(0), wb), PortRef::at(rung(m - 1), eb));
    for (int k = 0; k + 1 < m; ++k) {
        edges.push_back(EdgeRec{PortRef::at(rung(k), et), PortRef::at(rung(k + 1), wt)});
        edges.push_back(EdgeRec{PortRef::at(rung(k), eb), PortRef::at(rung(k + 1), wb)});
    }
    return LinkDiagram::from_parts(base + m, edges, free_loops);
}

// --- predicates ---------------------------------------------------------------

bool is_prime(const LinkDiagram& d) {
    if (d.crossing_count() == 0) fail("is_prime: diagram has no crossings");
    if (d.connected_piece_count() != 1 || d.free_loops() > 0)
        fail("is_prime: diagram is disconnected");
    // Nugatory crossing: one face meets a crossing at two opposite corners.
    for (std::uint32_t c = 0; c < d.crossing_count(); ++c)
        for (int s = 0; s < 2; ++s)
            if (d.face_of(half_edge(c, s)) == d.face_of(half_edge(c, s + 2)))
                return false;
    // Two edges cobounding the same pair of distinct faces admit a simple
    // closed curve through both; essential iff it separates crossings.
    std::map<std::pair<int, int>, std::vector<std::uint32_t>> buckets;
    for (std::uint32_t e = 0; e < d.edge_count(); ++e) {
        const EdgeRec& ed = d.edges()[e];
        int f1 = d.face_of(half_edge(ed.a.crossing, ed.a.slot));
        int f2 = d.face_of(half_edge(ed.b.crossing, ed.b.slot));
        if (f1 == f2) continue;
        buckets[{std::min(f1, f2), std::max(f1, f2)}].push_back(e);
    }
    for (const auto& [faces, group] : buckets) {
        if (group.size() < 2) continue;
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                std::vector<std::uint8_t> seen(d.crossing_count(), 0);
                std::vector<std::uint32_t> stack{0};
                seen[0] = 1;
                std::size_t reached = 1;
                while (!stack.empty()) {
                    std::uint32_t c = stack.back();
                    stack.pop_back();
                    for (int s = 0; s < 4; ++s) {
                        std::uint32_t e = d.edge_at(half_edge(c, s));
                        if (e == group[i] || e == group[j]) continue;
                        std::uint32_t far = he_crossing(d.mate(half_edge(c, s)));
                        if (!seen[far]) {
                            seen[far] = 1;
                            reached++;
                            stack.push_back(far);
                        }
                    }
                }
                if (reached < d.crossing_count()) return false;
            }
        }
    }
    return true;
}

namespace {

bool alternates(const std::vector<int>& unders, bool cyclic) {
    if (unders.size() < 2) return true;
    for (std::size_t i = 0; i + 1 < unders.size(); ++i)
        if (unders[i] == unders[i + 1]) return false;
    if (cyclic && unders.front() == unders.back()) return false;
    return true;
}

}  // namespace

bool is_alternating(const LinkDiagram& d) {
    std::vector<std::uint8_t> done(4 * d.crossing_count(), 0);
    for (std::uint32_t h0 = 0; h0 < 4 * d.crossing_count(); ++h0) {
        if (!d.arrival(h0) || done[h0]) continue;
        std::vector<int> unders;
        std::uint32_t h = h0;
        do {
            done[h] = 1;
            unders.push_back(he_slot(h) % 2 == 0 ? 1 : 0);
            h = d.mate(he_opposite(h));
        } while (h != h0);
        if (!alternates(unders, true)) return false;
    }
    return true;
}

namespace {

struct TangleWalker {
    const TangleDiagram& t;
    std::vector<std::uint32_t> mate;

    explicit TangleWalker(const TangleDiagram& tangle) : t(tangle) {
        mate.assign(4 * t.crossing_count(), UINT32_MAX);
        for (const EdgeRec& ed : t.edges()) {
            if (ed.a.is_corner() || ed.b.is_corner()) continue;
            std::uint32_t ha = half_edge(ed.a.crossing, ed.a.slot);
            std::uint32_t hb = half_edge(ed.b.crossing, ed.b.slot);
            mate[ha] = hb;
            mate[hb] = ha;
        }
    }

    // First crossing arrival walking inward from a corner; -1 if the
    // corner strand reaches another corner without any crossing.
    std::int64_t first_arrival(Corner c) const {
        std::uint32_t e = t.corner_edge(c);
        const EdgeRec& ed = t.edges()[e];
        PortRef far = (ed.a.is_corner() && ed.a.slot == static_cast<int>(c)) ? ed.b : ed.a;
        if (far.is_corner()) return -1;
        return half_edge(far.crossing, far.slot);
    }
};

}  // namespace

bool is_alternating(const TangleDiagram& t) {
    if (t.crossing_count() == 0) return true;
    TangleWalker w(t);
    std::vector<std::uint8_t> done(4 * t.crossing_count(), 0);
    for (int k = 0; k < 4; ++k) {
        std::int64_t h0 = w.first_arrival(static_cast<Corner>(k));
        if (h0 < 0) continue;
        std::uint32_t h = static_cast<std::uint32_t>(h0);
        if (done[h]) continue;
        std::vector<int> unders;
        while (true) {
            done[h] = 1;
            done[he_opposite(h)] = 1;
            unders.push_back(he_slot(h) % 2 == 0 ? 1 : 0);
            std::uint32_t dep = he_opposite(h);
            if (w.mate[dep] == UINT32_MAX) break;
            h = w.mate[dep];
        }
        if (!alternates(unders, false)) return false;
    }
    for (std::uint32_t h0 = 0; h0 < 4 * t.crossing_count(); ++h0) {
        if (done[h0] || done[he_opposite(h0)]) continue;
        std::vector<int> unders;
        std::uint32_t h = h0;
        do {
            done[h] = 1;
            done[he_opposite(h)] = 1;
            unders.push_back(he_slot(h) % 2 == 0 ? 1 : 0);
            h = w.mate[he_opposite(h)];
        } while (h != h0);
        if (!alternates(unders, true)) return false;
    }
    return true;
}

TangleSign tangle_sign(const TangleDiagram& t) {
    if (!is_alternating(t)) return TangleSign::NonAlternating;
    TangleWalker w(t);
    for (Corner c : {Corner::NE, Corner::SE, Corner::NW, Corner::SW}) {
        std::int64_t h = w.first_arrival(c);
        if (h < 0) continue;
        return he_slot(static_cast<std::uint32_t>(h)) % 2 == 1 ? TangleSign::Positive
                                                               : TangleSign::Negative;
    }
    return TangleSign::Positive;  // crossing-free: fixed by convention
}

bool is_strongly_alternating(const TangleDiagram& t) {
    if (!is_alternating(t)) return false;
    try {
        return is_prime(numerator_closure(t)) && is_prime(denominator_closure(t));
    } catch (const std::invalid_argument&) {
        return false;  // a closure with no crossings or split pieces is not prime
    }
}

int component_count(const LinkDiagram& d) { return d.component_count(); }

LinkDiagram mirror(const LinkDiagram& d) {
    std::vector<EdgeRec> edges = d.edges();
    for (EdgeRec& e : edges) {
        e.a.slot = (e.a.slot + 3) & 3;
        e.b.slot = (e.b.slot + 3) & 3;
    }
    LinkDiagram m = LinkDiagram::from_parts(d.crossing_count(), edges, d.free_loops());
    if (d.belt()) m.set_belt(*d.belt());
    return m;
}

TangleDiagram mirror(const TangleDiagram& t) {
    std::vector<EdgeRec> edges = t.edges();
    for (EdgeRec& e : edges)
        for (PortRef* p : {&e.a, &e.b})
            if (!p->is_corner()) p->slot = (p->slot + 3) & 3;
    return TangleDiagram::from_parts(t.crossing_count(), edges, t.free_loops());
}

LinkDiagram smooth_crossing(const LinkDiagram& d, std::uint32_t crossing, Resolution r) {
    if (crossing >= d.crossing_count()) fail("smooth_crossing: bad crossing index");
    Fusion fusion;
    fusion.free_loops = d.free_loops();
    auto joint = [](int slot) { return PortRef{-1000 - slot, 0}; };
    for (std::size_t e = 0; e < d.edge_count(); ++e) {
        EdgeRec copy = d.edges()[e];
        for (PortRef* p : {&copy.a, &copy.b}) {
            if (static_cast<std::uint32_t>(p->crossing) == crossing)
                *p = joint(p->slot);
            else if (static_cast<std::uint32_t>(p->crossing) > crossing)
                p->crossing--;
        }
        fusion.edges.push_back(copy);
    }
    // Resolution A joins slots (0,3) and (1,2); B joins (0,1) and (2,3).
    std::vector<std::pair<PortRef, PortRef>> bonds;
    if (r == Resolution::A) bonds = {{joint(0), joint(3)}, {joint(1), joint(2)}};
    else bonds = {{joint(0), joint(1)}, {joint(2), joint(3)}};
    fusion.resolve(bonds);
    return LinkDiagram::from_parts(d.crossing_count() - 1, fusion.out_edges, fusion.free_loops);
}

LinkDiagram add_kink(const LinkDiagram& d, std::uint32_t edge, int sign) {
    if (edge >= d.edge_count()) fail("add_kink: bad edge index");
    std::vector<EdgeRec> edges = d.edges();
    const std::int32_t k = static_cast<std::int32_t>(d.crossing_count());
    EdgeRec old = edges[edge];
    if (sign >= 0) {
        // slots ccw from west: 0=w, 1=s, 2=e, 3=n; strand under, loop e-n.
        edges[edge] = EdgeRec{old.a, PortRef::at(k, 0)};
        edges.push_back(EdgeRec{PortRef::at(k, 2), PortRef::at(k, 3)});
        edges.push_back(EdgeRec{PortRef::at(k, 1), old.b});
    } else {
        // slots ccw from north: 0=n, 1=w, 2=s, 3=e; strand over, loop e-n.
        edges[edge] = EdgeRec{old.a, PortRef::at(k, 1)};
        edges.push_back(EdgeRec{PortRef::at(k, 3), PortRef::at(k, 0)});
        edges.push_back(EdgeRec{PortRef::at(k, 2), old.b});
    }
    return LinkDiagram::from_parts(d.crossing_count() + 1, edges, d.free_loops());
}

// --- canonical form ------------------------------------------------------------

namespace {

std::vector<int> piece_code(const LinkDiagram& d, std::uint32_t h0, int dir) {
    // BFS relabeling from arrival h0; dir = +1 or +3 runs through each
    // crossing's rotation forwards or reflected.
    std::unordered_map<std::uint32_t, int> cross_index;
    std::unordered_map<std::uint32_t, int> edge_label;
    std::vector<std::uint32_t> queue{h0};
    std::size_t qi = 0;
    int next_edge = 1;
    std::vector<int> code;
    while (qi < queue.size()) {
        std::uint32_t h = queue[qi++];
        std::uint32_t c = he_crossing(h);
        if (cross_index.count(c)) continue;
        cross_index[c] = static_cast<int>(cross_index.size());
        int base = static_cast<int>(he_slot(h));
        code.push_back(base % 2);  // under-strand parity of the entry slot
        for (int k = 0; k < 4; ++k) {
            int slot = (base + k * dir) & 3;
            std::uint32_t hh = half_edge(c, slot);
            std::uint32_t e = d.edge_at(hh);
            auto it = edge_label.find(e);
            if (it == edge_label.end()) {
                edge_label[e] = next_edge++;
                queue.push_back(d.mate(hh));
            }
            code.push_back(edge_label[e]);
        }
    }
    return code;
}

}  // namespace

std::string canonical_code(const LinkDiagram& d) {
    std::vector<std::vector<std::uint32_t>> pieces(d.connected_piece_count());
    for (std::uint32_t c = 0; c < d.crossing_count(); ++c)
        pieces[d.piece_of_crossing(c)].push_back(c);
    std::vector<std::vector<int>> codes;
    for (const auto& piece : pieces) {
        std::vector<int> best;
        for (std::uint32_t c : piece) {
            for (int s = 0; s < 4; ++s) {
                for (int dir : {1, 3}) {
                    std::vector<int> code = piece_code(d, half_edge(c, s), dir);
                    if (best.empty() || code < best) best = std::move(code);
                }
            }
        }
        codes.push_back(std::move(best));
    }
    std::sort(codes.begin(), codes.end());
    std::ostringstream out;
    out << d.free_loops() << '|';
    for (const auto& code : codes) {
        for (int v : code) out << v << ',';
        out << ';';
    }
    return out.str();
}

bool is_isomorphic(const LinkDiagram& a, const LinkDiagram& b) {
    if (a.crossing_count() != b.crossing_count() || a.free_loops() != b.free_loops())
        return false;
    return canonical_code(a) == canonical_code(b);
}

// --- builders -------------------------------------------------------------------

LinkDiagram make_unknot(int circles) {
    if (circles < 0) fail("make_unknot: negative circle count");
    return LinkDiagram::from_parts(0, {}, circles);
}

TangleDiagram make_trivial_tangle(bool horizontal) {
    std::vector<EdgeRec> edges;
    if (horizontal) {
        edges.push_back(EdgeRec{PortRef::corner(Corner::NW), PortRef::corner(Corner::NE)});
        edges.push_back(EdgeRec{PortRef::corner(Corner::SW), PortRef::corner(Corner::SE)});
    } else {
        edges.push_back(EdgeRec{PortRef::corner(Corner::NW), PortRef::corner(Corner::SW)});
        edges.push_back(EdgeRec{PortRef::corner(Corner::NE), PortRef::corner(Corner::SE)});
    }
    return TangleDiagram::from_parts(0, edges, 0);
}

TangleDiagram add_crossing_east(const TangleDiagram& t, int sign) {
    const std::int32_t x = static_cast<std::int32_t>(t.crossing_count());
    // sign > 0: slots 0=wt, 1=wb, 2=eb, 3=et (under-strand wt-eb).
    // sign < 0: slots 0=wb, 1=eb, 2=et, 3=wt (under-strand wb-et).
    const int wt = sign > 0 ? 0 : 3, wb = sign > 0 ? 1 : 0;
    const int eb = sign > 0 ? 2 : 1, et = sign > 0 ? 3 : 2;
    std::vector<EdgeRec> edges = t.edges();
    for (EdgeRec& e : edges)
        for (PortRef* p : {&e.a, &e.b}) {
            if (!p->is_corner()) continue;
            if (p->slot == static_cast<int>(Corner::NE)) *p = PortRef::at(x, wt);
            else if (p->slot == static_cast<int>(Corner::SE)) *p = PortRef::at(x, wb);
        }
    edges.push_back(EdgeRec{PortRef::at(x, et), PortRef::corner(Corner::NE)});
    edges.push_back(EdgeRec{PortRef::at(x, eb), PortRef::corner(Corner::SE)});
    return TangleDiagram::from_parts(t.crossing_count() + 1, edges, t.free_loops());
}

TangleDiagram add_crossing_south(const TangleDiagram& t, int sign) {
    const std::int32_t x = static_cast<std::int32_t>(t.crossing_count());
    // sign > 0: slots 0=nl, 1=sl, 2=sr, 3=nr (under-strand nl-sr).
    // sign < 0: slots 0=nr, 1=nl, 2=sl, 3=sr (under-strand nr-sl).
    const int nl = sign > 0 ? 0 : 1, nr = sign > 0 ? 3 : 0;
    const int sl = sign > 0 ? 1 : 2, sr = sign > 0 ? 2 : 3;
    std::vector<EdgeRec> edges = t.edges();
    for (EdgeRec& e : edges)
        for (PortRef* p : {&e.a, &e.b}) {
            if (!p->is_corner()) continue;
            if (p->slot == static_cast<int>(Corner::SW)) *p = PortRef::at(x, nl);
            else if (p->slot == static_cast<int>(Corner::SE)) *p = PortRef::at(x, nr);
        }
    edges.push_back(EdgeRec{PortRef::at(x, sl), PortRef::corner(Corner::SW)});
    edges.push_back(EdgeRec{PortRef::at(x, sr), PortRef::corner(Corner::SE)});
    return TangleDiagram::from_parts(t.crossing_count() + 1, edges, t.free_loops());
}

TangleDiagram make_horizontal_twist(int q, int sign) {
    if (q < 0) fail("make_horizontal_twist: negative crossing count");
    TangleDiagram t = make_trivial_tangle(true);
    for (int i = 0; i < q; ++i) t = add_crossing_east(t, sign);
    return t;
}

TangleDiagram make_vertical_twist(int q, int sign) {
    if (q < 0) fail("make_vertical_twist: negative crossing count");
    TangleDiagram t = make_trivial_tangle(false);
    for (int i = 0; i < q; ++i) t = add_crossing_south(t, sign);
    return t;
}

}  // namespace tanglekit
