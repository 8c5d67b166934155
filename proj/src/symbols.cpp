#include "abel/symbols.hpp"
#include <algorithm>
#include <mutex>

namespace abel {

SymbolRegistry& SymbolRegistry::instance() {
    static SymbolRegistry r;
    return r;
}

SymbolRegistry::SymbolRegistry() {
    for (const char* n : {"x", "y", "t", "u"}) {
        SymbolInfo s;
        s.name = n;
        s.kind = SymbolKind::MainVar;
        by_name_.emplace(n, static_cast<SymId>(syms_.size()));
        syms_.push_back(std::move(s));
    }
}

SymId SymbolRegistry::add(SymbolInfo info, const std::string& dedup_key) {
    SymId id = static_cast<SymId>(syms_.size());
    if (!info.name.empty()) by_name_.emplace(info.name, id);
    if (!dedup_key.empty()) by_key_.emplace(dedup_key, id);
    syms_.push_back(std::move(info));
    return id;
}

SymId SymbolRegistry::intern(const std::string& name, bool strict) {
    {
        std::shared_lock lk(mu_);
        auto it = by_name_.find(name);
        if (it != by_name_.end()) return it->second;
    }
    if (strict) throw Error("unknown symbol: " + name);
    std::unique_lock lk(mu_);
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    SymbolInfo s;
    s.name = name;
    s.kind = SymbolKind::Param;
    return add(std::move(s), "");
}

std::optional<SymId> SymbolRegistry::lookup(const std::string& name) const {
    std::shared_lock lk(mu_);
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

SymbolInfo SymbolRegistry::info(SymId id) const {
    std::shared_lock lk(mu_);
    return syms_.at(id);
}

std::string SymbolRegistry::name(SymId id) const {
    std::shared_lock lk(mu_);
    return syms_.at(id).name;
}

SymbolKind SymbolRegistry::kind(SymId id) const {
    std::shared_lock lk(mu_);
    return syms_.at(id).kind;
}

bool SymbolRegistry::is_tower(SymId id) const {
    SymbolKind k = kind(id);
    return k == SymbolKind::TowerExp || k == SymbolKind::TowerLog || k == SymbolKind::TowerAtan ||
           k == SymbolKind::TowerSqrt || k == SymbolKind::TowerInt;
}

Polynomial SymbolRegistry::quadratic_rhs(SymId id) const {
    std::shared_lock lk(mu_);
    return syms_.at(id).sqrt_arg;
}

std::pair<SymId, long> SymbolRegistry::ensure_exp(const RationalFunction& arg) {
    std::string key = "exp:" + arg.key();
    {
        std::shared_lock lk(mu_);
        auto it = by_key_.find(key);
        if (it != by_key_.end()) return {it->second, 1};
    }
    // integer multiples of an existing argument: exp(n*E) = theta^n
    std::vector<std::pair<SymId, RationalFunction>> existing;
    {
        std::shared_lock lk(mu_);
        for (SymId id : exp_entries_) existing.push_back({id, syms_[id].arg});
    }
    for (auto& [id, e] : existing) {
        if (e.is_zero()) continue;
        RationalFunction ratio = arg / e;
        if (ratio.is_constant()) {
            Scalar c = ratio.as_scalar();
            if (c.is_integer() && c.re().get_num().fits_slong_p()) {
                long n = c.re().get_num().get_si();
                if (n != 0) return {id, n};
            }
        }
    }
    std::unique_lock lk(mu_);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return {it->second, 1};
    SymbolInfo s;
    s.kind = SymbolKind::TowerExp;
    s.arg = arg;
    SymId id = add(std::move(s), key);
    exp_entries_.push_back(id);
    return {id, 1};
}

SymId SymbolRegistry::ensure_log(const RationalFunction& arg) {
    std::string key = "log:" + arg.key();
    {
        std::shared_lock lk(mu_);
        auto it = by_key_.find(key);
        if (it != by_key_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    SymbolInfo s;
    s.kind = SymbolKind::TowerLog;
    s.arg = arg;
    return add(std::move(s), key);
}

SymId SymbolRegistry::ensure_atan(const RationalFunction& arg) {
    std::string key = "atan:" + arg.key();
    {
        std::shared_lock lk(mu_);
        auto it = by_key_.find(key);
        if (it != by_key_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    SymbolInfo s;
    s.kind = SymbolKind::TowerAtan;
    s.arg = arg;
    return add(std::move(s), key);
}

SymId SymbolRegistry::ensure_sqrt(const Polynomial& radicand) {
    std::string key = "sqrt:" + radicand.key();
    {
        std::shared_lock lk(mu_);
        auto it = by_key_.find(key);
        if (it != by_key_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    SymbolInfo s;
    s.kind = SymbolKind::TowerSqrt;
    s.sqrt_arg = radicand;
    return add(std::move(s), key);
}

SymId SymbolRegistry::ensure_int(const RationalFunction& integrand, SymId bound_var,
                                 const RationalFunction& arg, std::optional<Scalar> basepoint) {
    // bound variables are canonical per integration variable, so structural keys suffice
    std::string key = "int:" + std::to_string(bound_var) + ":" + integrand.key() + "@" + arg.key();
    {
        std::shared_lock lk(mu_);
        auto it = by_key_.find(key);
        if (it != by_key_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    SymbolInfo s;
    s.kind = SymbolKind::TowerInt;
    s.integrand = integrand;
    s.bound_var = bound_var;
    s.int_arg = arg;
    s.basepoint = basepoint;
    return add(std::move(s), key);
}

SymId SymbolRegistry::fresh_bound() {
    std::unique_lock lk(mu_);
    SymbolInfo s;
    s.name = "%" + std::to_string(++bound_counter_);
    s.kind = SymbolKind::BoundVar;
    return add(std::move(s), "");
}

SymId SymbolRegistry::bound_for(SymId var) {
    std::string nm = "%" + name(var);
    {
        std::shared_lock lk(mu_);
        auto it = by_name_.find(nm);
        if (it != by_name_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto it = by_name_.find(nm);
    if (it != by_name_.end()) return it->second;
    SymbolInfo s;
    s.name = nm;
    s.kind = SymbolKind::BoundVar;
    return add(std::move(s), "");
}

std::vector<std::pair<SymId, Polynomial>> SymbolRegistry::sqrt_radicands() const {
    std::shared_lock lk(mu_);
    std::vector<std::pair<SymId, Polynomial>> out;
    for (SymId i = 0; i < syms_.size(); ++i)
        if (syms_[i].kind == SymbolKind::TowerSqrt) out.push_back({i, syms_[i].sqrt_arg});
    return out;
}

std::size_t SymbolRegistry::size() const {
    std::shared_lock lk(mu_);
    return syms_.size();
}

SymId SymbolRegistry::named_sqrt_param(const std::string& name, const Polynomial& rhs) {
    std::unique_lock lk(mu_);
    auto it = by_name_.find(name);
    if (it != by_name_.end()) {
        const SymbolInfo& s = syms_[it->second];
        if (s.kind == SymbolKind::TowerSqrt && s.sqrt_arg == rhs) return it->second;
        throw Error("symbol already registered with a different meaning: " + name);
    }
    SymbolInfo s;
    s.name = name;
    s.kind = SymbolKind::TowerSqrt;
    s.sqrt_arg = rhs;
    return add(std::move(s), "sqrt:" + rhs.key() + ":" + name);
}

} // namespace abel
