#include "lotop/sights.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace lotop {

// ---------------------------------------------------------------------------
// Sight

Sight Sight::node(std::vector<std::pair<Nat, Sight>> children)
{
    std::sort(children.begin(), children.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < children.size(); ++i)
        if (children[i].first == children[i - 1].first)
            throw std::invalid_argument("duplicate branch element " + children[i].first.str());
    Sight s;
    auto n = std::make_shared<Node>();
    n->children = std::move(children);
    s.node_ = std::move(n);
    return s;
}

Sight Sight::flat(const std::vector<Nat>& branch)
{
    std::vector<std::pair<Nat, Sight>> ch;
    for (const auto& a : branch) ch.emplace_back(a, Sight::nil());
    return node(std::move(ch));
}

const std::vector<std::pair<Nat, Sight>>& Sight::children() const
{
    static const std::vector<std::pair<Nat, Sight>> none;
    return node_ ? node_->children : none;
}

std::vector<Nat> Sight::branch_elems() const
{
    std::vector<Nat> out;
    for (const auto& [a, _] : children()) out.push_back(a);
    return out;
}

const Sight* Sight::child(const Nat& a) const
{
    const auto& ch = children();
    auto it = std::lower_bound(ch.begin(), ch.end(), a, [](const auto& p, const Nat& k) { return p.first < k; });
    if (it == ch.end() || it->first != a) return nullptr;
    return &it->second;
}

const Sight* Sight::subsight(const Seq& s) const
{
    const Sight* cur = this;
    for (const auto& x : s) {
        cur = cur->child(x);
        if (!cur) return nullptr;
    }
    return cur;
}

bool Sight::is_leaf(const Seq& s) const
{
    const Sight* sub = subsight(s);
    return sub && sub->is_nil();
}

bool Sight::is_degenerate() const
{
    if (is_nil()) return false;
    if (children().empty()) return true;
    for (const auto& [_, c] : children())
        if (c.is_degenerate()) return true;
    return false;
}

std::size_t Sight::depth() const
{
    std::size_t d = 0;
    for (const auto& [_, c] : children()) d = std::max(d, 1 + c.depth());
    return is_nil() ? 0 : std::max<std::size_t>(d, 1);
}

bool Sight::operator==(const Sight& o) const
{
    if (is_nil() || o.is_nil()) return is_nil() == o.is_nil();
    if (node_ == o.node_) return true;
    const auto& a = children();
    const auto& b = o.children();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
    return true;
}

std::string Sight::to_string() const
{
    if (is_nil()) return "Nil";
    std::string out = "(";
    bool first = true;
    for (const auto& [a, c] : children()) {
        if (!first) out += ",";
        first = false;
        out += a.str() + ":" + c.to_string();
    }
    return out + ")";
}

namespace {

class SightParser {
public:
    explicit SightParser(const std::string& s) : s_(s) {}
    Sight parse()
    {
        Sight r = sight();
        ws();
        if (pos_ != s_.size()) fail("trailing input");
        return r;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what)
    {
        throw std::invalid_argument(fmt::format("sight notation: {} at offset {}", what, pos_));
    }
    void ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c)
    {
        ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    Sight sight()
    {
        ws();
        if (s_.compare(pos_, 3, "Nil") == 0) {
            pos_ += 3;
            return Sight::nil();
        }
        if (!eat('(')) fail("expected Nil or '('");
        std::vector<std::pair<Nat, Sight>> ch;
        if (eat(')')) return Sight::node({});
        do {
            ws();
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected branch element");
            Nat a = parse_nat(s_.substr(st, pos_ - st));
            if (!eat(':')) fail("expected ':'");
            ch.emplace_back(a, sight());
        } while (eat(','));
        if (!eat(')')) fail("expected ')'");
        try {
            return Sight::node(std::move(ch));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
};

void collect_nodes(const Sight& s, Seq& path, std::vector<Seq>& out, bool leaves_only)
{
    if (!leaves_only || s.is_nil()) out.push_back(path);
    for (const auto& [a, c] : s.children()) {
        path.push_back(a);
        collect_nodes(c, path, out, leaves_only);
        path.pop_back();
    }
}

} // namespace

Sight parse_sight(const std::string& text) { return SightParser(text).parse(); }

std::size_t node_count(const Sight& s)
{
    std::size_t n = 1;
    for (const auto& [_, c] : s.children()) n += node_count(c);
    return n;
}

std::vector<Seq> sight_nodes(const Sight& s)
{
    std::vector<Seq> out;
    Seq path;
    collect_nodes(s, path, out, false);
    return out;
}

std::vector<Seq> sight_leaves(const Sight& s)
{
    std::vector<Seq> out;
    Seq path;
    collect_nodes(s, path, out, true);
    return out;
}

// ---------------------------------------------------------------------------
// Well-founded trees

bool is_tree(const WfTree& t)
{
    if (t.empty() || !t.count(Seq{})) return false;
    for (const auto& s : t) {
        if (s.empty()) continue;
        Seq parent(s.begin(), s.end() - 1);
        if (!t.count(parent)) return false;
    }
    return true;
}

std::vector<Seq> tree_leaves(const WfTree& t)
{
    std::vector<Seq> out;
    for (auto it = t.begin(); it != t.end(); ++it) {
        // In lexicographic order the first extension of s, if any, follows s directly.
        auto next = std::next(it);
        bool extended = next != t.end() && next->size() > it->size() &&
                        std::equal(it->begin(), it->end(), next->begin());
        if (!extended) out.push_back(*it);
    }
    return out;
}

std::vector<Nat> tree_out(const WfTree& t, const Seq& s)
{
    std::vector<Nat> out;
    for (auto it = t.upper_bound(s); it != t.end(); ++it) {
        if (it->size() <= s.size() || !std::equal(s.begin(), s.end(), it->begin())) break;
        if (it->size() == s.size() + 1) out.push_back(it->back());
    }
    return out;
}

std::size_t foundation_number(const WfTree& t)
{
    std::size_t best = SIZE_MAX;
    for (const auto& l : tree_leaves(t)) best = std::min(best, l.size());
    return best;
}

WfTree subtree(const WfTree& t, const Seq& s)
{
    WfTree out;
    for (auto it = t.lower_bound(s); it != t.end(); ++it) {
        if (it->size() < s.size() || !std::equal(s.begin(), s.end(), it->begin())) break;
        out.insert(Seq(it->begin() + static_cast<std::ptrdiff_t>(s.size()), it->end()));
    }
    return out;
}

WfTree tree_of(const Sight& s)
{
    if (s.is_degenerate()) throw std::invalid_argument("degenerate sight has no tree form");
    auto nodes = sight_nodes(s);
    return WfTree(nodes.begin(), nodes.end());
}

Sight sight_of(const WfTree& t)
{
    if (!is_tree(t)) throw std::invalid_argument("not a tree: empty or not prefix-closed");
    std::function<Sight(const Seq&)> build = [&](const Seq& s) {
        auto out = tree_out(t, s);
        if (out.empty()) return Sight::nil();
        std::vector<std::pair<Nat, Sight>> ch;
        for (const auto& a : out) {
            Seq c = s;
            c.push_back(a);
            ch.emplace_back(a, build(c));
        }
        return Sight::node(std::move(ch));
    };
    return build(Seq{});
}

std::string tree_to_string(const WfTree& t)
{
    std::string out = "{";
    bool first = true;
    for (const auto& s : t) {
        if (!first) out += ",";
        first = false;
        out += seq_to_string(s);
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Partial sequence functions

PartialSeqFn PartialSeqFn::coded(Code c, std::string label)
{
    PartialSeqFn f;
    f.code_ = std::move(c);
    f.label_ = label.empty() ? "code" : std::move(label);
    return f;
}

PartialSeqFn PartialSeqFn::native(const std::string& name, Host host)
{
    Host h = host;
    Code c = register_metered_builtin(
        name,
        [h](const Nat& arg, Meter& m) -> AppResult {
            auto s = decode_seq(arg);
            if (!s) return AppResult::stuck();
            return h(*s, m);
        },
        "native:" + name);
    PartialSeqFn f;
    f.code_ = c;
    f.host_ = std::move(host);
    f.native_ = true;
    f.label_ = name;
    return f;
}

PartialSeqFn PartialSeqFn::accelerated(Code c, Host host, std::string label)
{
    PartialSeqFn f;
    f.code_ = std::move(c);
    f.host_ = std::move(host);
    f.label_ = std::move(label);
    return f;
}

AppResult PartialSeqFn::eval(const Seq& s, Meter& meter) const
{
    if (host_) return host_(s, meter);
    return eval_coded(s, meter);
}

AppResult PartialSeqFn::eval(const Seq& s, std::uint64_t fuel) const
{
    Meter m(fuel);
    return eval(s, m);
}

AppResult PartialSeqFn::eval_coded(const Seq& s, Meter& meter) const
{
    if (!code_) return AppResult::stuck();
    return apply(*code_, encode_seq(s), meter);
}

namespace {

const Code& shift_code()
{
    // λq.λs. q_1 ($cons ⟨q_2, s⟩) with q = ⟨w, a⟩
    static const Code c = compile("λq s. q_1 ($cons ⟨q_2, s⟩)");
    return c;
}

} // namespace

PartialSeqFn shifted(const PartialSeqFn& w, const Nat& a)
{
    std::optional<Code> code;
    if (w.code()) code = smn(shift_code(), encode_pair(*w.code(), a));
    PartialSeqFn base = w;
    auto host = [base, a](const Seq& s, Meter& m) {
        Seq t;
        t.reserve(s.size() + 1);
        t.push_back(a);
        t.insert(t.end(), s.begin(), s.end());
        return base.eval(t, m);
    };
    if (!code) throw std::invalid_argument("shifted: function has no code");
    return PartialSeqFn::accelerated(*code, host, w.label() + "@" + a.str());
}

// ---------------------------------------------------------------------------
// Dedication and support

namespace {

std::string at(const Seq& s) { return "at " + seq_to_string(s); }

Verdict dedicated_rec(const Sight& s, const Nat& z, const ThetaSeq& theta, const SetExpr& p,
                      std::uint64_t fuel, Seq& path)
{
    auto [tag, rest] = decode_pair(z);
    if (s.is_nil()) {
        if (tag == 0 && member(p, rest)) return Verdict::verified();
        if (tag != 0) return Verdict::refuted(fmt::format("{}: Nil needs z=<0,y>, got tag {}", at(path), tag.str()));
        return Verdict::refuted(fmt::format("{}: {} not in {}", at(path), rest.str(), p.to_string()));
    }
    if (tag != 1) return Verdict::refuted(fmt::format("{}: node needs z=<1,<n,e>>, got tag {}", at(path), tag.str()));
    auto [n, e] = decode_pair(rest);
    SetExpr branch = s.branch();
    if (!theta.contains(n, branch))
        return Verdict::refuted(fmt::format("{}: branch {} not in theta({})", at(path), branch.to_string(), n.str()));
    AllOf all;
    for (const auto& [a, c] : s.children()) {
        AppResult r = apply(e, a, fuel);
        path.push_back(a);
        if (r.is_stuck()) {
            Verdict v = Verdict::refuted(fmt::format("{}: e({}) stuck", at(path), a.str()));
            path.pop_back();
            return v;
        }
        if (r.is_exhausted()) {
            all.add(Verdict::unknown(fmt::format("{}: fuel exhausted", at(path))));
        } else {
            Verdict v = dedicated_rec(c, r.value, theta, p, fuel, path);
            all.add(v);
        }
        path.pop_back();
        if (all.refuted()) return all.acc;
    }
    return all.acc;
}

Verdict check_value(const AppResult& r, bool leaf, const std::optional<SetExpr>& out, const ThetaSeq& theta,
                    const SetExpr& p, const Seq& path)
{
    if (r.is_stuck()) return Verdict::refuted(at(path) + ": w undefined");
    if (r.is_exhausted()) return Verdict::unknown(at(path) + ": fuel exhausted");
    auto [tag, y] = decode_pair(r.value);
    if (leaf) {
        if (tag != 0) return Verdict::refuted(fmt::format("{}: leaf needs <0,y>, got tag {}", at(path), tag.str()));
        if (!member(p, y)) return Verdict::refuted(fmt::format("{}: {} not in {}", at(path), y.str(), p.to_string()));
        return Verdict::verified();
    }
    if (tag != 1) return Verdict::refuted(fmt::format("{}: inner node needs <1,n>, got tag {}", at(path), tag.str()));
    if (!theta.contains(y, *out))
        return Verdict::refuted(fmt::format("{}: out-set {} not in theta({})", at(path), out->to_string(), y.str()));
    return Verdict::verified();
}

Verdict supporting_rec(const Sight& s, const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                       std::uint64_t fuel, Seq& path)
{
    AllOf all;
    std::optional<SetExpr> out;
    if (!s.is_nil()) out = s.branch();
    all.add(check_value(w.eval(path, fuel), s.is_nil(), out, theta, p, path));
    if (all.refuted()) return all.acc;
    for (const auto& [a, c] : s.children()) {
        path.push_back(a);
        all.add(supporting_rec(c, w, theta, p, fuel, path));
        path.pop_back();
        if (all.refuted()) return all.acc;
    }
    return all.acc;
}

} // namespace

Verdict check_dedicated(const Sight& s, const Nat& z, const ThetaSeq& theta, const SetExpr& p, std::uint64_t fuel)
{
    Seq path;
    return dedicated_rec(s, z, theta, p, fuel, path);
}

Verdict check_supporting(const Sight& s, const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                         std::uint64_t fuel)
{
    Seq path;
    return supporting_rec(s, w, theta, p, fuel, path);
}

Verdict check_supporting(const WfTree& t, const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                         std::uint64_t fuel)
{
    return check_supporting(sight_of(t), w, theta, p, fuel);
}

std::string describe(const SupportBounds& b)
{
    return fmt::format("children<{},nodes<={},fuel={},seed={}", b.child_bound, b.max_nodes, b.fuel, b.seed);
}

namespace {

struct ImplicitWalk {
    const ImplicitTree& t;
    const PartialSeqFn& w;
    const ThetaSeq& theta;
    const SetExpr& p;
    const SupportBounds& b;
    std::mt19937_64 rng;
    SupportReport rep;
    AllOf all;

    void visit(Seq& s, NodeStatus st, std::uint64_t budget)
    {
        ++rep.nodes_checked;
        bool leaf = st.kind == NodeStatus::Kind::Leaf;
        if (leaf) ++rep.leaves_checked;
        if (!leaf && s.size() >= t.depth_bound) {
            all.add(Verdict::refuted(fmt::format("{}: inner node at depth bound {}", at(s), t.depth_bound)));
            return;
        }
        all.add(check_value(w.eval(s, b.fuel), leaf, st.out, theta, p, s));
        if (all.refuted() || leaf) return;
        const SetExpr& out = *st.out;
        std::vector<std::pair<Nat, NodeStatus>> kids;
        for (std::uint64_t x = 0; x < b.child_bound; ++x) {
            s.emplace_back(x);
            NodeStatus cs = t.status(s);
            s.pop_back();
            bool in = member(out, x);
            if (in != (cs.kind != NodeStatus::Kind::NotNode)) {
                all.add(Verdict::refuted(
                    fmt::format("{}: child {} disagrees with out-set {}", at(s), x, out.to_string())));
                return;
            }
            if (in) kids.emplace_back(Nat(x), std::move(cs));
        }
        auto fe = out.finite_elements();
        if (!fe || (!fe->empty() && fe->back() >= b.child_bound)) rep.exhaustive = false;
        if (kids.empty()) return;
        std::uint64_t rest = budget > 1 ? budget - 1 : 0;
        if (rest >= kids.size()) {
            std::uint64_t share = rest / kids.size(), extra = rest % kids.size();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                s.push_back(kids[i].first);
                visit(s, kids[i].second, share + (i < extra ? 1 : 0));
                s.pop_back();
                if (all.refuted()) return;
            }
            return;
        }
        // Out of budget: sample children and walk each down to a leaf.
        rep.exhaustive = false;
        std::shuffle(kids.begin(), kids.end(), rng);
        std::size_t take = std::max<std::uint64_t>(rest, 1);
        for (std::size_t i = 0; i < take && i < kids.size(); ++i) {
            s.push_back(kids[i].first);
            visit(s, kids[i].second, 1);
            s.pop_back();
            if (all.refuted()) return;
        }
    }
};

} // namespace

SupportReport check_supporting(const ImplicitTree& t, const PartialSeqFn& w, const ThetaSeq& theta,
                               const SetExpr& p, const SupportBounds& bounds)
{
    ImplicitWalk walk{t, w, theta, p, bounds, std::mt19937_64(bounds.seed), {}, {}};
    walk.rep.exhaustive = true;
    Seq root;
    NodeStatus st = t.status(root);
    if (st.kind == NodeStatus::Kind::NotNode) {
        walk.rep.verdict = Verdict::refuted("() is not a node");
        return walk.rep;
    }
    walk.visit(root, st, bounds.max_nodes);
    SupportReport rep = walk.rep;
    rep.verdict = walk.all.acc;
    if (rep.verdict.is_verified() && !rep.exhaustive) rep.verdict = Verdict::upto(describe(bounds));
    return rep;
}

ImplicitTree implicit_of(const WfTree& t)
{
    std::size_t depth = 0;
    for (const auto& s : t) depth = std::max(depth, s.size());
    auto shared = std::make_shared<const WfTree>(t);
    ImplicitTree it;
    it.depth_bound = depth;
    it.descriptor = "explicit:" + tree_to_string(t);
    it.status = [shared](const Seq& s) {
        if (!shared->count(s)) return NodeStatus::not_node();
        auto out = tree_out(*shared, s);
        if (out.empty()) return NodeStatus::leaf();
        return NodeStatus::inner(SetExpr::fin(out));
    };
    return it;
}

// ---------------------------------------------------------------------------
// bwd / fwd / star realizers

namespace {

// B⟨z,s⟩ = bwd_z(s)
const Code& bwd_code()
{
    static const Code c = [] {
        Code b = compile(R"(fix (λself q.
            let z = q_1 in let s = q_2 in
            ifz ($len s)
                (ifz z_1 ⟨0, z_2⟩ (ifz ($eq ⟨z_1, 1⟩) ($bot 0) ⟨1, z_2_1⟩))
                (ifz ($eq ⟨z_1, 1⟩) ($bot 0) (self ⟨(z_2_2) ($nth ⟨s, 0⟩), $drop ⟨s, 1⟩⟩))))");
        return compile("λz s. B ⟨z, s⟩", {{"B", b}});
    }();
    return c;
}

// F⟨w,s⟩ = fwd'_w(s)
const Code& fwd_code()
{
    static const Code c = [] {
        Code fk = compile("λq x. q_1 ⟨q_2_1, $snoc ⟨q_2_2, x⟩⟩");
        Code g = compile(R"(λself q.
            let v = (q_1) (q_2) in
            ifz v_1 ⟨0, v_2⟩
                (ifz ($eq ⟨v_1, 1⟩) ($bot 0) ⟨1, ⟨v_2, $smn ⟨FK, ⟨self, q⟩⟩⟩⟩))",
                         {{"FK", fk}});
        return fixpoint_code(g);
    }();
    return c;
}

// STAR⟨a,b⟩ s = (a*b)(s)
const Code& star_code()
{
    static const Code c = [] {
        // SB⟨b,⟨t,⟨y,j⟩⟩⟩ scans b over prefixes of the suffix t.
        Code sb = compile(R"(fix (λself q.
            let b = q_1 in let t = q_2_1 in let y = q_2_2_1 in let j = q_2_2_2 in
            let u = b ($take ⟨t, j⟩) in
            let last = $eq ⟨j, $len t⟩ in
            ifz u_1
                (ifz last ($bot 0) ⟨0, ⟨y, u_2⟩⟩)
                (ifz ($eq ⟨u_1, 1⟩) ($bot 0)
                    (ifz last (self ⟨b, ⟨t, ⟨y, suc j⟩⟩⟩) u))))");
        // SA⟨a,⟨b,⟨s,k⟩⟩⟩ scans a over prefixes of s.
        Code sa = compile(R"(fix (λself q.
            let a = q_1 in let b = q_2_1 in let s = q_2_2_1 in let k = q_2_2_2 in
            let v = a ($take ⟨s, k⟩) in
            ifz v_1
                (SB ⟨b, ⟨$drop ⟨s, k⟩, ⟨v_2, 0⟩⟩⟩)
                (ifz ($eq ⟨v_1, 1⟩) ($bot 0)
                    (ifz ($eq ⟨k, $len s⟩) (self ⟨a, ⟨b, ⟨s, suc k⟩⟩⟩) v))))",
                            {{"SB", sb}});
        return compile("λab s. SA ⟨ab_1, ⟨ab_2, ⟨s, 0⟩⟩⟩", {{"SA", sa}});
    }();
    return c;
}

} // namespace

const Code& star_kernel() { return star_code(); }

PartialSeqFn bwd_transform(const Nat& z)
{
    return PartialSeqFn::coded(smn(bwd_code(), z), "bwd_" + z.str());
}

const Code& fwd_kernel() { return fwd_code(); }

AppResult fwd_transform(const PartialSeqFn& w, std::uint64_t fuel)
{
    if (!w.code()) throw std::invalid_argument("fwd_transform: function has no code");
    return apply(fwd_code(), encode_pair(*w.code(), encode_seq({})), fuel);
}

WfTree concat_sights(const WfTree& s, const WfTree& t)
{
    if (!is_tree(s) || !is_tree(t)) throw std::invalid_argument("concat_sights: arguments must be trees");
    WfTree out;
    for (const auto& l : tree_leaves(s)) {
        for (std::size_t i = 0; i <= l.size(); ++i) out.insert(Seq(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i)));
        for (const auto& u : t) {
            Seq st = l;
            st.insert(st.end(), u.begin(), u.end());
            out.insert(std::move(st));
        }
    }
    return out;
}

PartialSeqFn star_action(const PartialSeqFn& a, const PartialSeqFn& b)
{
    if (!a.code() || !b.code()) throw std::invalid_argument("star_action: functions need codes");
    Code c = smn(star_code(), encode_pair(*a.code(), *b.code()));
    auto host = [a, b](const Seq& s, Meter& m) -> AppResult {
        for (std::size_t k = 0; k <= s.size(); ++k) {
            AppResult v = a.eval(Seq(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k)), m);
            if (!v.is_defined()) return v;
            auto [tag, y] = decode_pair(v.value);
            if (tag == 1) {
                if (k == s.size()) return v;
                continue;
            }
            if (tag != 0) return AppResult::stuck();
            Seq t(s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
            for (std::size_t j = 0; j <= t.size(); ++j) {
                AppResult u = b.eval(Seq(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(j)), m);
                if (!u.is_defined()) return u;
                auto [ut, uz] = decode_pair(u.value);
                bool last = j == t.size();
                if (ut == 0) return last ? AppResult::defined(encode_pair(0, encode_pair(y, uz))) : AppResult::stuck();
                if (ut != 1) return AppResult::stuck();
                if (last) return u;
            }
        }
        return AppResult::stuck();
    };
    return PartialSeqFn::accelerated(c, host, "(" + a.label() + "*" + b.label() + ")");
}

// ---------------------------------------------------------------------------
// Sectors and node finders

Sight full_nary_sector(const Sight& s, std::size_t n)
{
    if (s.is_nil()) return s;
    const auto& ch = s.children();
    if (ch.size() < n)
        throw std::invalid_argument(fmt::format("branch {} has fewer than {} elements", s.branch().to_string(), n));
    std::vector<std::pair<Nat, Sight>> kept;
    for (std::size_t i = 0; i < n; ++i) kept.emplace_back(ch[i].first, full_nary_sector(ch[i].second, n));
    return Sight::node(std::move(kept));
}

namespace {

void check_on(const Sight& s, const Collection& c, const std::string& who)
{
    if (s.is_nil()) return;
    if (!c.contains(s.branch()))
        throw std::invalid_argument(fmt::format("{}: branch {} not in {}", who, s.branch().to_string(), c.label()));
    for (const auto& [_, ch] : s.children()) check_on(ch, c, who);
}

} // namespace

Seq joint_intersection_node(const std::vector<Sight>& ss, const std::vector<Collection>& colls)
{
    if (ss.empty()) throw std::invalid_argument("joint_intersection_node: no sights");
    if (!colls.empty()) {
        if (colls.size() != ss.size()) throw std::invalid_argument("joint_intersection_node: size mismatch");
        for (std::size_t i = 0; i < ss.size(); ++i) check_on(ss[i], colls[i], "S_" + std::to_string(i + 1));
    }
    std::vector<const Sight*> cur;
    for (const auto& s : ss) cur.push_back(&s);
    Seq d;
    for (;;) {
        for (auto* s : cur)
            if (s->is_nil()) return d;
        std::vector<Nat> common = cur[0]->branch_elems();
        for (std::size_t i = 1; i < cur.size() && !common.empty(); ++i) {
            std::vector<Nat> b = cur[i]->branch_elems(), next;
            std::set_intersection(common.begin(), common.end(), b.begin(), b.end(), std::back_inserter(next));
            common = std::move(next);
        }
        if (common.empty())
            throw std::runtime_error("joint intersection property fails at " + seq_to_string(d));
        const Nat& a = common.front();
        d.push_back(a);
        for (auto& s : cur) s = s->child(a);
    }
}

AppResult r_value(const Nat& z, const Seq& s, std::uint64_t fuel)
{
    Meter m(fuel);
    Nat cur = z;
    for (const auto& x : s) {
        auto [tag, rest] = decode_pair(cur);
        if (tag != 1) return AppResult::stuck();
        Nat e = snd(rest);
        AppResult r = apply(e, x, m);
        if (!r.is_defined()) return r;
        cur = r.value;
    }
    auto [tag, y] = decode_pair(cur);
    if (tag != 0) return AppResult::stuck();
    return AppResult::defined(y);
}

RImage r_image(const Nat& z, const Sight& s, std::uint64_t fuel)
{
    RImage out;
    AllOf all;
    for (const auto& leaf : sight_leaves(s)) {
        AppResult r = r_value(z, leaf, fuel);
        if (r.is_stuck()) {
            out.verdict = Verdict::refuted("not r-defined at leaf " + seq_to_string(leaf));
            return out;
        }
        if (r.is_exhausted())
            all.add(Verdict::unknown("fuel exhausted at leaf " + seq_to_string(leaf)));
        else
            out.values.insert(r.value);
    }
    out.verdict = all.acc;
    return out;
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string dot_of(const std::vector<Seq>& nodes, const std::function<bool(const Seq&)>& leaf, const char* name)
{
    std::map<Seq, std::size_t> ids;
    std::string out = fmt::format("digraph {} {{\n  node [fontname=\"monospace\"];\n", name);
    for (const auto& s : nodes) {
        std::size_t id = ids.size();
        ids.emplace(s, id);
        out += fmt::format("  n{} [label=\"{}\", shape={}];\n", id, seq_to_string(s),
                           leaf(s) ? "doublecircle" : "box");
    }
    for (const auto& s : nodes) {
        if (s.empty()) continue;
        Seq parent(s.begin(), s.end() - 1);
        out += fmt::format("  n{} -> n{} [label=\"{}\"];\n", ids.at(parent), ids.at(s), s.back().str());
    }
    return out + "}\n";
}

} // namespace

std::string to_dot(const Sight& s)
{
    return dot_of(sight_nodes(s), [&](const Seq& q) { return s.is_leaf(q); }, "sight");
}

std::string to_dot(const WfTree& t)
{
    std::vector<Seq> nodes(t.begin(), t.end());
    return dot_of(nodes, [&](const Seq& q) { return tree_out(t, q).empty(); }, "wftree");
}

} // namespace lotop
