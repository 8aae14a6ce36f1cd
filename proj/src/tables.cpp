#include "lotop/tables.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace lotop {

namespace {

using Table = std::unordered_map<Nat, Nat, NatHash>;

struct Store {
    std::shared_mutex mu;
    std::deque<Table> tables;  // deque keeps references stable
};

Store& store()
{
    static Store s;
    return s;
}

std::optional<Nat> table_lookup(const Nat& arg)
{
    auto [h, key] = decode_pair(arg);
    auto& st = store();
    std::shared_lock lock(st.mu);
    if (h >= st.tables.size()) return std::nullopt;
    const Table& t = st.tables[static_cast<std::size_t>(h)];
    auto it = t.find(key);
    if (it == t.end()) return std::nullopt;
    return it->second;
}

const Code& table_wrapper()
{
    static const Code c = [] {
        register_builtin("table", table_lookup);
        return compile("λh x. $table ⟨h, x⟩");
    }();
    return c;
}

} // namespace

Code table_code(const std::map<Nat, Nat>& entries)
{
    const Code& wrap = table_wrapper();
    std::size_t handle;
    {
        auto& st = store();
        std::unique_lock lock(st.mu);
        handle = st.tables.size();
        st.tables.emplace_back(entries.begin(), entries.end());
    }
    return smn(wrap, Nat(handle));
}

Code table_seq_code(const std::map<Seq, Nat>& entries)
{
    std::map<Nat, Nat> flat;
    for (const auto& [s, v] : entries) flat.emplace(encode_seq(s), v);
    return table_code(flat);
}

} // namespace lotop
