#include "coddlab/codd.hpp"

#include <algorithm>
#include <unordered_set>

namespace coddlab {

Bits bits_from_bytes(const std::vector<std::uint8_t>& bytes)
{
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes) {
        for (int i = 7; i >= 0; --i) {
            bits.push_back((byte >> i) & 1u);
        }
    }
    return bits;
}

std::vector<std::uint8_t> bytes_from_bits(const Bits& bits)
{
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) {
            bytes[i / 8] |= std::uint8_t(1u << (7 - i % 8));
        }
    }
    return bytes;
}

// ---------------------------------------------------------------------------
// Builder

namespace {

std::string node_key(const CoddNode& n)
{
    std::string key;
    key += static_cast<char>(n.tag);
    switch (n.tag) {
    case CoddTag::Leaf:
        for (bool b : n.bits) {
            key += b ? '1' : '0';
        }
        break;
    case CoddTag::Decide:
        key += std::to_string(n.bit_index) + "," + std::to_string(n.a) + "," +
               std::to_string(n.b);
        break;
    case CoddTag::Apply:
        key += std::to_string(n.a) + "," + std::to_string(n.b);
        break;
    default:
        break;
    }
    return key;
}

} // namespace

std::uint32_t CoddBuilder::intern(CoddNode n)
{
    std::string key = node_key(n);
    auto it = interned_.find(key);
    if (it != interned_.end()) {
        return it->second;
    }
    std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(std::move(n));
    interned_.emplace(std::move(key), idx);
    return idx;
}

std::uint32_t CoddBuilder::leaf(Bits bits)
{
    CoddNode n;
    n.tag = CoddTag::Leaf;
    n.bits = std::move(bits);
    return intern(std::move(n));
}

std::uint32_t CoddBuilder::leaf(const BitString& s)
{
    Bits bits(s.length);
    for (int i = 0; i < s.length; ++i) {
        bits[i] = s.bit(i);
    }
    return leaf(std::move(bits));
}

std::uint32_t CoddBuilder::decide(std::uint16_t bit_index, std::uint32_t on_zero,
                                  std::uint32_t on_one)
{
    if (on_zero >= nodes_.size() || on_one >= nodes_.size()) {
        throw std::out_of_range("CoddBuilder::decide: child index out of range");
    }
    CoddNode n;
    n.tag = CoddTag::Decide;
    n.bit_index = bit_index;
    n.a = on_zero;
    n.b = on_one;
    return intern(std::move(n));
}

std::uint32_t CoddBuilder::combinator(CoddTag tag)
{
    switch (tag) {
    case CoddTag::K:
    case CoddTag::S:
    case CoddTag::Sp:
    case CoddTag::Encode:
    case CoddTag::Decode:
        break;
    default:
        throw std::invalid_argument("CoddBuilder::combinator: not a combinator tag");
    }
    CoddNode n;
    n.tag = tag;
    return intern(std::move(n));
}

std::uint32_t CoddBuilder::apply(std::uint32_t fn, std::uint32_t arg)
{
    if (fn >= nodes_.size() || arg >= nodes_.size()) {
        throw std::out_of_range("CoddBuilder::apply: index out of range");
    }
    CoddNode n;
    n.tag = CoddTag::Apply;
    n.a = fn;
    n.b = arg;
    return intern(std::move(n));
}

std::uint32_t CoddBuilder::import(const CoddExpr& e)
{
    std::vector<std::uint32_t> remap(e.nodes().size());
    for (std::size_t i = 0; i < e.nodes().size(); ++i) {
        CoddNode n = e.nodes()[i];
        if (n.tag == CoddTag::Decide || n.tag == CoddTag::Apply) {
            n.a = remap[n.a];
            n.b = remap[n.b];
        }
        remap[i] = intern(std::move(n));
    }
    return remap.back();
}

CoddExpr CoddBuilder::extract(std::uint32_t root) const
{
    std::vector<CoddNode> out;
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    // Iterative DFS, children first, a (on_zero / fn) before b.
    struct Frame {
        std::uint32_t idx;
        bool expanded;
    };
    std::vector<Frame> stack{{root, false}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (remap.contains(f.idx)) {
            continue;
        }
        const CoddNode& n = nodes_.at(f.idx);
        bool branching = n.tag == CoddTag::Decide || n.tag == CoddTag::Apply;
        if (!f.expanded && branching) {
            stack.push_back({f.idx, true});
            stack.push_back({n.b, false});
            stack.push_back({n.a, false});
            continue;
        }
        CoddNode copy = n;
        if (branching) {
            copy.a = remap.at(n.a);
            copy.b = remap.at(n.b);
        }
        remap.emplace(f.idx, static_cast<std::uint32_t>(out.size()));
        out.push_back(std::move(copy));
    }
    return CoddExpr::from_nodes(std::move(out));
}

// ---------------------------------------------------------------------------
// CoddExpr

CoddExpr CoddExpr::from_nodes(std::vector<CoddNode> nodes)
{
    if (nodes.empty()) {
        throw std::invalid_argument("CoddExpr: empty node table");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const CoddNode& n = nodes[i];
        if ((n.tag == CoddTag::Decide || n.tag == CoddTag::Apply) && (n.a >= i || n.b >= i)) {
            throw std::invalid_argument("CoddExpr: node " + std::to_string(i) +
                                        " references a non-earlier node");
        }
    }
    CoddExpr e;
    e.nodes_ = std::move(nodes);
    return e;
}

CoddExpr CoddExpr::leaf(Bits bits)
{
    CoddBuilder b;
    return b.extract(b.leaf(std::move(bits)));
}

CoddExpr CoddExpr::leaf(const BitString& s)
{
    CoddBuilder b;
    return b.extract(b.leaf(s));
}

CoddExpr CoddExpr::k()
{
    CoddBuilder b;
    return b.extract(b.combinator(CoddTag::K));
}

CoddExpr CoddExpr::s()
{
    CoddBuilder b;
    return b.extract(b.combinator(CoddTag::S));
}

CoddExpr CoddExpr::sp()
{
    CoddBuilder b;
    return b.extract(b.combinator(CoddTag::Sp));
}

CoddExpr CoddExpr::encoder()
{
    CoddBuilder b;
    return b.extract(b.combinator(CoddTag::Encode));
}

CoddExpr CoddExpr::decoder()
{
    CoddBuilder b;
    return b.extract(b.combinator(CoddTag::Decode));
}

CoddExpr CoddExpr::decide(std::uint16_t bit_index, const CoddExpr& on_zero,
                          const CoddExpr& on_one)
{
    CoddBuilder b;
    std::uint32_t z = b.import(on_zero);
    std::uint32_t o = b.import(on_one);
    return b.extract(b.decide(bit_index, z, o));
}

CoddExpr CoddExpr::apply(const CoddExpr& fn, const CoddExpr& arg)
{
    CoddBuilder b;
    std::uint32_t f = b.import(fn);
    std::uint32_t a = b.import(arg);
    return b.extract(b.apply(f, a));
}

bool CoddExpr::operator==(const CoddExpr& o) const
{
    return encode(*this) == encode(o);
}

// ---------------------------------------------------------------------------
// Bit-exact encoding

namespace {

class BitWriter {
public:
    void push(bool bit) { bits_.push_back(bit); }

    void write_uint(std::uint32_t value, int width)
    {
        for (int i = width - 1; i >= 0; --i) {
            bits_.push_back((value >> i) & 1u);
        }
    }

    Bits take()
    {
        while (bits_.size() % 8 != 0) {
            bits_.push_back(false);
        }
        return std::move(bits_);
    }

private:
    Bits bits_;
};

class BitReader {
public:
    explicit BitReader(const Bits& bits)
        : bits_(bits)
    {
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bits_.size() - pos_; }

    std::uint32_t read_uint(int width, const char* what)
    {
        if (remaining() < static_cast<std::size_t>(width)) {
            throw DecodeError(pos_, std::string("truncated ") + what);
        }
        std::uint32_t v = 0;
        for (int i = 0; i < width; ++i) {
            v = (v << 1) | static_cast<std::uint32_t>(bits_[pos_++]);
        }
        return v;
    }

private:
    const Bits& bits_;
    std::size_t pos_ = 0;
};

constexpr std::uint32_t kMaxEncodableNodes = 0xFFFF;

} // namespace

Bits encode(const CoddExpr& e)
{
    // Re-canonicalize: dedupe shared structure and fix the node order.
    CoddBuilder b;
    CoddExpr canon = b.extract(b.import(e));
    const auto& nodes = canon.nodes();
    if (nodes.size() > kMaxEncodableNodes) {
        throw std::length_error("encode: expression exceeds 65535 nodes");
    }
    BitWriter w;
    w.write_uint(static_cast<std::uint32_t>(nodes.size()), 16);
    for (const CoddNode& n : nodes) {
        w.write_uint(static_cast<std::uint32_t>(n.tag), 3);
        switch (n.tag) {
        case CoddTag::Leaf:
            if (n.bits.size() > kMaxEncodableNodes) {
                throw std::length_error("encode: leaf payload exceeds 65535 bits");
            }
            w.write_uint(static_cast<std::uint32_t>(n.bits.size()), 16);
            for (bool bit : n.bits) {
                w.push(bit);
            }
            break;
        case CoddTag::Decide:
            w.write_uint(n.bit_index, 16);
            w.write_uint(n.a, 16);
            w.write_uint(n.b, 16);
            break;
        case CoddTag::Apply:
            w.write_uint(n.a, 16);
            w.write_uint(n.b, 16);
            break;
        default:
            break;
        }
    }
    return w.take();
}

std::vector<std::uint8_t> encode_bytes(const CoddExpr& e)
{
    return bytes_from_bits(encode(e));
}

CoddExpr decode(const Bits& bits)
{
    BitReader r(bits);
    std::size_t count_off = r.pos();
    std::uint32_t count = r.read_uint(16, "node count header");
    if (count == 0) {
        throw DecodeError(count_off, "node count is zero");
    }
    std::vector<CoddNode> nodes;
    nodes.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        CoddNode n;
        std::size_t tag_off = r.pos();
        std::uint32_t tag = r.read_uint(3, "node tag");
        n.tag = static_cast<CoddTag>(tag);
        switch (n.tag) {
        case CoddTag::Leaf: {
            std::uint32_t len = r.read_uint(16, "leaf length");
            if (r.remaining() < len) {
                throw DecodeError(r.pos(), "truncated leaf payload");
            }
            n.bits.reserve(len);
            for (std::uint32_t j = 0; j < len; ++j) {
                n.bits.push_back(r.read_uint(1, "leaf payload"));
            }
            break;
        }
        case CoddTag::Decide: {
            n.bit_index = static_cast<std::uint16_t>(r.read_uint(16, "decide bit index"));
            std::size_t ref_off = r.pos();
            n.a = r.read_uint(16, "decide on_zero reference");
            if (n.a >= i) {
                throw DecodeError(ref_off, "node " + std::to_string(i) +
                                               " references non-earlier node " +
                                               std::to_string(n.a));
            }
            ref_off = r.pos();
            n.b = r.read_uint(16, "decide on_one reference");
            if (n.b >= i) {
                throw DecodeError(ref_off, "node " + std::to_string(i) +
                                               " references non-earlier node " +
                                               std::to_string(n.b));
            }
            break;
        }
        case CoddTag::Apply: {
            std::size_t ref_off = r.pos();
            n.a = r.read_uint(16, "apply fn reference");
            if (n.a >= i) {
                throw DecodeError(ref_off, "node " + std::to_string(i) +
                                               " references non-earlier node " +
                                               std::to_string(n.a));
            }
            ref_off = r.pos();
            n.b = r.read_uint(16, "apply arg reference");
            if (n.b >= i) {
                throw DecodeError(ref_off, "node " + std::to_string(i) +
                                               " references non-earlier node " +
                                               std::to_string(n.b));
            }
            break;
        }
        case CoddTag::K:
        case CoddTag::S:
        case CoddTag::Sp:
        case CoddTag::Encode:
        case CoddTag::Decode:
            break;
        default:
            throw DecodeError(tag_off, "invalid node tag");
        }
        nodes.push_back(std::move(n));
    }
    if (r.remaining() >= 8) {
        throw DecodeError(r.pos(), "trailing bits after final node");
    }
    while (r.remaining() > 0) {
        std::size_t off = r.pos();
        if (r.read_uint(1, "padding")) {
            throw DecodeError(off, "nonzero padding bit");
        }
    }
    return CoddExpr::from_nodes(std::move(nodes));
}

CoddExpr decode_bytes(const std::vector<std::uint8_t>& bytes)
{
    return decode(bits_from_bytes(bytes));
}

// ---------------------------------------------------------------------------
// Measures

namespace {

std::vector<bool> reachable_mask(const CoddExpr& e)
{
    std::vector<bool> reach(e.nodes().size(), false);
    std::vector<std::uint32_t> stack{e.root()};
    while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        if (reach[i]) {
            continue;
        }
        reach[i] = true;
        const CoddNode& n = e.nodes()[i];
        if (n.tag == CoddTag::Decide || n.tag == CoddTag::Apply) {
            stack.push_back(n.a);
            stack.push_back(n.b);
        }
    }
    return reach;
}

} // namespace

int codd_size(const CoddExpr& e)
{
    auto reach = reachable_mask(e);
    int count = 0;
    for (std::size_t i = 0; i < e.nodes().size(); ++i) {
        if (reach[i] && e.nodes()[i].tag == CoddTag::Decide) {
            ++count;
        }
    }
    return count;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class EvalCtx {
public:
    explicit EvalCtx(std::uint64_t fuel)
        : fuel_(fuel)
    {
    }

    CoddBuilder& builder() { return b_; }
    std::uint64_t steps() const { return steps_; }
    bool exhausted() const { return exhausted_; }

    std::uint32_t normalize(std::uint32_t idx)
    {
        idx = reduce_head(idx);
        if (exhausted_) {
            return idx;
        }
        // Head is stuck; normalize the remaining spine arguments.
        std::vector<std::uint32_t> args;
        std::uint32_t head = idx;
        while (b_.node(head).tag == CoddTag::Apply) {
            args.push_back(b_.node(head).b);
            head = b_.node(head).a;
        }
        if (args.empty()) {
            return idx;
        }
        std::reverse(args.begin(), args.end());
        std::uint32_t out = head;
        for (std::uint32_t a : args) {
            out = b_.apply(out, exhausted_ ? a : normalize(a));
        }
        return out;
    }

private:
    bool step()
    {
        if (fuel_ == 0) {
            exhausted_ = true;
            return false;
        }
        --fuel_;
        ++steps_;
        return true;
    }

    std::uint32_t rebuild(std::uint32_t head, const std::vector<std::uint32_t>& args,
                          std::size_t from)
    {
        std::uint32_t idx = head;
        for (std::size_t i = from; i < args.size(); ++i) {
            idx = b_.apply(idx, args[i]);
        }
        return idx;
    }

    // Leftmost-outermost reduction until the head is a value or stuck.
    std::uint32_t reduce_head(std::uint32_t idx)
    {
        for (;;) {
            if (exhausted_) {
                return idx;
            }
            std::vector<std::uint32_t> args;
            std::uint32_t head = idx;
            while (b_.node(head).tag == CoddTag::Apply) {
                args.push_back(b_.node(head).b);
                head = b_.node(head).a;
            }
            std::reverse(args.begin(), args.end());
            const CoddNode h = b_.node(head);
            std::uint32_t result = 0;
            std::size_t consumed = 0;
            switch (h.tag) {
            case CoddTag::K:
                if (args.size() < 2 || !step()) {
                    return idx;
                }
                result = args[0];
                consumed = 2;
                break;
            case CoddTag::S:
                if (args.size() < 3 || !step()) {
                    return idx;
                }
                result = b_.apply(b_.apply(args[0], args[2]), b_.apply(args[1], args[2]));
                consumed = 3;
                break;
            case CoddTag::Sp:
                if (args.size() < 3 || !step()) {
                    return idx;
                }
                result = b_.apply(b_.apply(args[0], args[1]), b_.apply(args[0], args[2]));
                consumed = 3;
                break;
            case CoddTag::Encode: {
                if (args.size() < 1) {
                    return idx;
                }
                std::uint32_t v = normalize(args[0]);
                if (exhausted_ || !step()) {
                    return rebuild(b_.apply(head, v), args, 1);
                }
                result = b_.leaf(encode(b_.extract(v)));
                consumed = 1;
                break;
            }
            case CoddTag::Decode: {
                if (args.size() < 1) {
                    return idx;
                }
                std::uint32_t v = normalize(args[0]);
                if (exhausted_) {
                    return rebuild(b_.apply(head, v), args, 1);
                }
                if (b_.node(v).tag != CoddTag::Leaf) {
                    return rebuild(b_.apply(head, v), args, 1); // stuck
                }
                if (!step()) {
                    return rebuild(b_.apply(head, v), args, 1);
                }
                result = b_.import(decode(b_.node(v).bits)); // may throw DecodeError
                consumed = 1;
                break;
            }
            case CoddTag::Decide: {
                if (args.size() < 1) {
                    return idx;
                }
                std::uint32_t v = normalize(args[0]);
                if (exhausted_) {
                    return rebuild(b_.apply(head, v), args, 1);
                }
                const CoddNode& vn = b_.node(v);
                if (vn.tag != CoddTag::Leaf) {
                    return rebuild(b_.apply(head, v), args, 1); // stuck
                }
                if (!step()) {
                    return rebuild(b_.apply(head, v), args, 1);
                }
                // Out-of-range bit index reads as 0.
                bool bit = h.bit_index < vn.bits.size() && vn.bits[h.bit_index];
                result = bit ? h.b : h.a;
                consumed = 1;
                break;
            }
            case CoddTag::Leaf:
                return idx; // a leaf applied to arguments is stuck
            case CoddTag::Apply:
                return idx; // unreachable: spine fully unwound
            }
            idx = rebuild(result, args, consumed);
        }
    }

    CoddBuilder b_;
    std::uint64_t fuel_;
    std::uint64_t steps_ = 0;
    bool exhausted_ = false;
};

} // namespace

EvalOutcome eval_codd(const CoddExpr& e, const std::vector<CoddExpr>& args, std::uint64_t fuel)
{
    EvalCtx ctx(fuel);
    std::uint32_t idx = ctx.builder().import(e);
    for (const CoddExpr& a : args) {
        idx = ctx.builder().apply(idx, ctx.builder().import(a));
    }
    idx = ctx.normalize(idx);
    EvalOutcome out{ctx.builder().extract(idx), ctx.steps(), ctx.exhausted()};
    return out;
}

// ---------------------------------------------------------------------------
// Pattern-based memoization

std::vector<RepeatGroup> find_repeats(const CoddExpr& e)
{
    CoddBuilder b;
    std::uint32_t root = b.import(e);
    CoddExpr canon = b.extract(root);
    auto reach = reachable_mask(canon);
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> sites;
    for (std::uint32_t i = 0; i < canon.nodes().size(); ++i) {
        if (reach[i] && canon.nodes()[i].tag == CoddTag::Apply) {
            sites[canon.nodes()[i].a].push_back(i);
        }
    }
    CoddBuilder cb;
    cb.import(canon);
    std::vector<RepeatGroup> groups;
    for (auto& [fn, apply_sites] : sites) {
        if (apply_sites.size() < 2) {
            continue;
        }
        RepeatGroup g;
        g.pattern = cb.extract(fn);
        g.pattern_nodes = static_cast<int>(g.pattern.nodes().size());
        std::sort(apply_sites.begin(), apply_sites.end());
        g.apply_sites = apply_sites;
        groups.push_back(std::move(g));
    }
    std::sort(groups.begin(), groups.end(), [](const RepeatGroup& x, const RepeatGroup& y) {
        if (x.pattern_nodes != y.pattern_nodes) {
            return x.pattern_nodes > y.pattern_nodes; // largest first
        }
        return x.apply_sites.front() < y.apply_sites.front();
    });
    return groups;
}

namespace {

class MemoRewriter {
public:
    MemoRewriter(const CoddBuilder& in, std::uint32_t pattern)
        : in_(in)
        , pattern_(pattern)
    {
    }

    std::uint32_t map(std::uint32_t idx)
    {
        auto it = memo_.find(idx);
        if (it != memo_.end()) {
            return it->second;
        }
        const CoddNode& n = in_.node(idx);
        std::uint32_t result;
        if (n.tag == CoddTag::Apply) {
            const CoddNode& fn = in_.node(n.a);
            const CoddNode& arg = in_.node(n.b);
            if (fn.tag == CoddTag::Apply && arg.tag == CoddTag::Apply && fn.a == pattern_ &&
                arg.a == pattern_) {
                // (P a)(P b)  ->  Sp P a b
                ++sites_;
                std::uint32_t sp = out_.combinator(CoddTag::Sp);
                result = out_.apply(
                    out_.apply(out_.apply(sp, map(pattern_)), map(fn.b)), map(arg.b));
            } else {
                std::uint32_t f = map(n.a);
                result = out_.apply(f, map(n.b));
            }
        } else if (n.tag == CoddTag::Decide) {
            std::uint32_t z = map(n.a);
            result = out_.decide(n.bit_index, z, map(n.b));
        } else if (n.tag == CoddTag::Leaf) {
            result = out_.leaf(n.bits);
        } else {
            result = out_.combinator(n.tag);
        }
        memo_.emplace(idx, result);
        return result;
    }

    CoddBuilder& out() { return out_; }
    int sites() const { return sites_; }

private:
    const CoddBuilder& in_;
    std::uint32_t pattern_;
    CoddBuilder out_;
    int sites_ = 0;
    std::unordered_map<std::uint32_t, std::uint32_t> memo_;
};

} // namespace

RewriteResult memoize_rewrite(const CoddExpr& e, const CoddExpr& pattern)
{
    CoddBuilder in;
    std::uint32_t root = in.import(e);
    // Hash-consing gives the pattern at most one index; locate it.
    Bits wanted = encode(pattern);
    std::uint32_t pidx = 0;
    bool found = false;
    for (std::uint32_t i = 0; i < in.node_count() && !found; ++i) {
        if (in.node(i).tag == pattern.root_node().tag && encode(in.extract(i)) == wanted) {
            pidx = i;
            found = true;
        }
    }
    if (!found) {
        return RewriteResult{e, 0};
    }
    MemoRewriter rw(in, pidx);
    std::uint32_t new_root = rw.map(root);
    if (rw.sites() == 0) {
        return RewriteResult{e, 0};
    }
    return RewriteResult{rw.out().extract(new_root), rw.sites()};
}

} // namespace coddlab
