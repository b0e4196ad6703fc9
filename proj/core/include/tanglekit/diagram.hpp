#ifndef TANGLEKIT_DIAGRAM_HPP
#define TANGLEKIT_DIAGRAM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tanglekit {

// Corner labels of a tangle, in the boundary order NW, NE, SE, SW.
enum class Corner : int { NW = 0, NE = 1, SE = 2, SW = 3 };
const char* corner_name(Corner c);

enum class Resolution : std::uint8_t { A, B };

enum class TangleSign { Positive, Negative, NonAlternating };

// One endpoint of an edge: either a crossing slot or a tangle corner.
struct PortRef {
    std::int32_t crossing = -1;  // -1 means a corner endpoint
    std::int32_t slot = 0;       // slot 0..3, or Corner index when crossing < 0

    bool is_corner() const { return crossing < 0; }
    static PortRef at(std::int32_t crossing, std::int32_t slot) { return {crossing, slot}; }
    static PortRef corner(Corner c) { return {-1, static_cast<std::int32_t>(c)}; }
    friend bool operator==(const PortRef& a, const PortRef& b) {
        return a.crossing == b.crossing && a.slot == b.slot;
    }
};

struct EdgeRec {
    PortRef a, b;
};

// A crossing stores the edge id found at each of its four slots, in
// counterclockwise rotation order.  Slot 0 carries the incoming
// under-strand; slots 0 and 2 are the under-strand, 1 and 3 the over.
struct CrossingRec {
    std::array<std::uint32_t, 4> edge{};
};

// Metadata left behind by add_belt so that twist_fill can undo it.
struct BeltInfo {
    std::array<std::uint32_t, 4> belt_crossings{};  // west-N, west-S, east-S, east-N
    int belt_component = -1;
};

// Half-edges are numbered 4*crossing + slot.
inline std::uint32_t half_edge(std::uint32_t crossing, std::uint32_t slot) {
    return 4 * crossing + slot;
}
inline std::uint32_t he_crossing(std::uint32_t h) { return h / 4; }
inline std::uint32_t he_slot(std::uint32_t h) { return h % 4; }
inline std::uint32_t he_opposite(std::uint32_t h) { return (h & ~3u) | ((h + 2) & 3u); }

// A link diagram as a combinatorial map on the sphere: 4-valent
// crossings with over/under data, an edge pairing of half-edges, and
// crossing-free circles counted separately.  Instances are immutable
// once built; every operation below returns a fresh value.
class LinkDiagram {
public:
    LinkDiagram() = default;

    // Validates 4-valence, the sphere embedding (V - E + F = 2 on every
    // connected piece), traces components, and normalizes each crossing
    // so the traced orientation enters the under-strand at slot 0.
    // Crossing records are derived from the edge list.
    static LinkDiagram from_parts(std::size_t crossing_count,
                                  std::vector<EdgeRec> edges, int free_loops);

    std::size_t crossing_count() const { return crossings_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    int free_loops() const { return free_loops_; }
    const std::vector<CrossingRec>& crossings() const { return crossings_; }
    const std::vector<EdgeRec>& edges() const { return edges_; }

    std::uint32_t mate(std::uint32_t h) const { return mate_[h]; }
    std::uint32_t edge_at(std::uint32_t h) const {
        return crossings_[he_crossing(h)].edge[he_slot(h)];
    }

    // Faces traced from the rotation system; face ids are 0..face_count-1.
    int face_count() const { return face_count_; }
    int face_of(std::uint32_t h) const { return face_of_[h]; }

    // Link components: strand circles first, then free loops.
    int component_count() const { return component_count_; }
    int component_of_edge(std::uint32_t e) const { return edge_component_[e]; }

    // True when the traced orientation arrives at the crossing through h.
    bool arrival(std::uint32_t h) const { return arrival_[h] != 0; }

    int crossing_sign(std::uint32_t c) const;  // +1 / -1
    int writhe() const;

    // Connected pieces of the underlying 4-valent graph (free loops not
    // included).  Used by primality and validation.
    int connected_piece_count() const { return piece_count_; }
    int piece_of_crossing(std::uint32_t c) const { return crossing_piece_[c]; }

    const std::optional<BeltInfo>& belt() const { return belt_; }
    void set_belt(BeltInfo info) { belt_ = info; }

private:
    std::vector<CrossingRec> crossings_;
    std::vector<EdgeRec> edges_;
    int free_loops_ = 0;

    std::vector<std::uint32_t> mate_;
    std::vector<std::int32_t> face_of_;
    int face_count_ = 0;
    std::vector<std::int32_t> edge_component_;
    int component_count_ = 0;
    std::vector<std::uint8_t> arrival_;
    std::vector<std::int32_t> crossing_piece_;
    int piece_count_ = 0;
    std::optional<BeltInfo> belt_;
};

// A tangle: crossings plus four boundary endpoints NW, NE, SE, SW.
// Validation collapses the square's boundary to a virtual vertex with
// rotation (NW, NE, SE, SW) and runs the same sphere check.
class TangleDiagram {
public:
    TangleDiagram() = default;

    static TangleDiagram from_parts(std::size_t crossing_count,
                                    std::vector<EdgeRec> edges, int free_loops);

    std::size_t crossing_count() const { return crossings_.size(); }
    const std::vector<CrossingRec>& crossings() const { return crossings_; }
    const std::vector<EdgeRec>& edges() const { return edges_; }
    int free_loops() const { return free_loops_; }

    // Edge id attached at a corner.
    std::uint32_t corner_edge(Corner c) const { return corner_edge_[static_cast<int>(c)]; }

private:
    std::vector<CrossingRec> crossings_;
    std::vector<EdgeRec> edges_;
    int free_loops_ = 0;
    std::array<std::uint32_t, 4> corner_edge_{};
};

// --- text formats ---------------------------------------------------------

// PD text: whitespace-separated tokens, either X(a,b,c,d) for a crossing
// (edge labels counterclockwise from the incoming under-strand) or O for
// a crossing-free circle.  Lines starting with '#' are comments.
LinkDiagram parse_pd(std::string_view text);
std::string emit_pd(const LinkDiagram& d);

// Tangle text: a PD body followed by a trailer NW=a NE=b SE=c SW=d.
TangleDiagram parse_tangle(std::string_view text);
std::string emit_tangle(const TangleDiagram& t);

// --- closures and sums ----------------------------------------------------

LinkDiagram numerator_closure(const TangleDiagram& t);
LinkDiagram denominator_closure(const TangleDiagram& t);

// West-to-east concatenation of tangles (no closure applied).
TangleDiagram concat_tangles(const std::vector<TangleDiagram>& tangles);

// A Conway sum remembers its decomposition for downstream analyses.
struct ConwaySum {
    LinkDiagram diagram;
    std::vector<TangleDiagram> tangles;
    // Crossing ids of `diagram` owned by each summand, in order.
    std::vector<std::vector<std::uint32_t>> crossing_ids;
};

ConwaySum conway_sum(const std::vector<TangleDiagram>& tangles);

// Belted tangle: numerator closure plus an unknotted circle crossing each
// closure arc twice.  The belt passes over both arcs at its west
// intersections and under both at its east intersections.
LinkDiagram add_belt(const TangleDiagram& t);

// 1/n filling of the belt: removes the belt and inserts 2|n| crossings of
// a twist between the two encircled strands (handedness by sign of n).
LinkDiagram twist_fill(const LinkDiagram& belted, int n);

// --- predicates and small surgeries ----------------------------------------

bool is_prime(const LinkDiagram& d);          // throws on disconnected or crossing-free input
bool is_alternating(const LinkDiagram& d);
bool is_alternating(const TangleDiagram& t);
TangleSign tangle_sign(const TangleDiagram& t);
bool is_strongly_alternating(const TangleDiagram& t);
int component_count(const LinkDiagram& d);

LinkDiagram mirror(const LinkDiagram& d);
TangleDiagram mirror(const TangleDiagram& t);

// Replaces one crossing by one of its two smoothings.
LinkDiagram smooth_crossing(const LinkDiagram& d, std::uint32_t crossing, Resolution r);

// Inserts a one-crossing kink on the given edge; sign picks the chirality.
LinkDiagram add_kink(const LinkDiagram& d, std::uint32_t edge, int sign);

// Canonical form: minimal lexicographic relabeling over all starting
// half-edges and both reflections, per connected piece.  Two diagrams are
// isomorphic as labeled maps iff their canonical codes agree.
std::string canonical_code(const LinkDiagram& d);
bool is_isomorphic(const LinkDiagram& a, const LinkDiagram& b);

// --- builders ---------------------------------------------------------------

LinkDiagram make_unknot(int circles = 1);
// Horizontal trivial tangle: arcs NW-NE and SW-SE.  Vertical: NW-SW, NE-SE.
TangleDiagram make_trivial_tangle(bool horizontal = true);
// q crossings in a row running west-east (the east-west twist of a (2,q)
// torus closure); sign +1 makes the tangle positive.
TangleDiagram make_horizontal_twist(int q, int sign = 1);
// q crossings stacked north-south.
TangleDiagram make_vertical_twist(int q, int sign = 1);
// One crossing appended on the named side of the tangle.
TangleDiagram add_crossing_east(const TangleDiagram& t, int sign);
TangleDiagram add_crossing_south(const TangleDiagram& t, int sign);

}  // namespace tanglekit

#endif
