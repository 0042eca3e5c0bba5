#pragma once

#include "coddlab/space.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace coddlab {

/// Bit sequence, first (most significant) bit at index 0.
using Bits = std::vector<bool>;

Bits bits_from_bytes(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> bytes_from_bits(const Bits& bits); // zero-padded

enum class CoddTag : std::uint8_t {
    Leaf = 0,
    Decide = 1,
    K = 2,
    S = 3,
    Sp = 4, // sharing variant of S: Sp f x y -> (f x)(f y)
    Encode = 5,
    Decode = 6,
    Apply = 7,
};

struct CoddNode {
    CoddTag tag = CoddTag::Leaf;
    Bits bits;                   // Leaf payload
    std::uint16_t bit_index = 0; // Decide
    std::uint32_t a = 0;         // Decide on_zero / Apply fn
    std::uint32_t b = 0;         // Decide on_one / Apply arg

    bool operator==(const CoddNode&) const = default;
};

class CoddExpr;

/// Hash-consing node arena. Structurally equal nodes share one index, which
/// is what makes these expressions dags rather than trees.
class CoddBuilder {
public:
    std::uint32_t leaf(Bits bits);
    std::uint32_t leaf(const BitString& s);
    std::uint32_t decide(std::uint16_t bit_index, std::uint32_t on_zero, std::uint32_t on_one);
    std::uint32_t combinator(CoddTag tag); // K, S, Sp, Encode, Decode
    std::uint32_t apply(std::uint32_t fn, std::uint32_t arg);

    /// Merges all nodes of e, returns the index of e's root.
    std::uint32_t import(const CoddExpr& e);

    const CoddNode& node(std::uint32_t i) const { return nodes_.at(i); }
    std::size_t node_count() const { return nodes_.size(); }

    /// Slice of nodes reachable from root, in canonical topological order
    /// (depth-first, children first, on_zero/fn before on_one/arg).
    CoddExpr extract(std::uint32_t root) const;

private:
    std::uint32_t intern(CoddNode n);

    std::vector<CoddNode> nodes_;
    // key: serialized node, value: index
    std::unordered_map<std::string, std::uint32_t> interned_;
};

/// Immutable dag expression: node table in topological order (children
/// precede parents), root last.
class CoddExpr {
public:
    CoddExpr() { nodes_.push_back(CoddNode{}); } // Leaf with empty payload

    static CoddExpr leaf(Bits bits);
    static CoddExpr leaf(const BitString& s);
    static CoddExpr k();
    static CoddExpr s();
    static CoddExpr sp();
    static CoddExpr encoder();
    static CoddExpr decoder();
    static CoddExpr decide(std::uint16_t bit_index, const CoddExpr& on_zero,
                           const CoddExpr& on_one);
    static CoddExpr apply(const CoddExpr& fn, const CoddExpr& arg);

    /// From a raw node table; validates topology (refs point earlier).
    static CoddExpr from_nodes(std::vector<CoddNode> nodes);

    const std::vector<CoddNode>& nodes() const { return nodes_; }
    std::uint32_t root() const { return static_cast<std::uint32_t>(nodes_.size() - 1); }
    const CoddNode& root_node() const { return nodes_.back(); }

    /// Structural equality up to canonical ordering and sharing.
    bool operator==(const CoddExpr& o) const;

private:
    std::vector<CoddNode> nodes_;
};

struct DecodeError : std::runtime_error {
    DecodeError(std::size_t bit_offset, const std::string& reason)
        : std::runtime_error("decode error at offset " + std::to_string(bit_offset) + ": " +
                             reason)
        , offset(bit_offset)
    {
    }
    std::size_t offset;
};

/// Canonical bit-exact serialization, zero-padded to a byte boundary.
Bits encode(const CoddExpr& e);
std::vector<std::uint8_t> encode_bytes(const CoddExpr& e);

/// Inverse of encode on its image. Throws DecodeError on malformed input.
CoddExpr decode(const Bits& bits);
CoddExpr decode_bytes(const std::vector<std::uint8_t>& bytes);

/// Number of distinct Decide nodes reachable from the root.
int codd_size(const CoddExpr& e);

struct EvalOutcome {
    CoddExpr result; // normal form, or the partially reduced expression
    std::uint64_t steps = 0;
    bool fuel_exhausted = false;
};

/// Normal-order reduction with a step budget. Args are applied left to
/// right as curried applications. Decode on malformed leaf bits throws
/// DecodeError; running out of fuel is reported in the outcome, not thrown.
EvalOutcome eval_codd(const CoddExpr& e, const std::vector<CoddExpr>& args, std::uint64_t fuel);

struct RepeatGroup {
    CoddExpr pattern;
    int pattern_nodes = 0;               // total node count of the pattern subdag
    std::vector<std::uint32_t> apply_sites; // indices of Apply nodes using it as fn
};

/// Subdags occurring at least twice in function position, largest first.
std::vector<RepeatGroup> find_repeats(const CoddExpr& e);

struct RewriteResult {
    CoddExpr expr;
    int sites_rewritten = 0; // 0: pattern not repeated, expression unchanged
};

/// Rewrites every (P a)(P b) into Sp P a b.
RewriteResult memoize_rewrite(const CoddExpr& e, const CoddExpr& pattern);

} // namespace coddlab
