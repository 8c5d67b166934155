// Global symbol registry: named variables/parameters and the extension tower.
//
// The tower holds one entry per adjoined indeterminate: exp/log/atan arguments,
// formal integrals, and quadratic radicals theta^2 = R. Each defining value uses
// only earlier symbols, so normalization and differentiation terminate. The
// registry is append-only and synchronized; entries are immutable once added.
#pragma once

#include "abel/polynomial.hpp"
#include "abel/ratfunc.hpp"

#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace abel {

enum class SymbolKind { MainVar, Param, BoundVar, TowerExp, TowerLog, TowerAtan, TowerSqrt, TowerInt };

struct SymbolInfo {
    std::string name;
    SymbolKind kind = SymbolKind::Param;
    RationalFunction arg;                 // exp/log/atan argument
    Polynomial sqrt_arg;                  // theta^2 = sqrt_arg
    RationalFunction integrand;           // Int: integrand in bound_var
    SymId bound_var = 0;
    RationalFunction int_arg;             // Int: evaluation argument
    std::optional<Scalar> basepoint;
};

class SymbolRegistry {
public:
    static SymbolRegistry& instance();

    // Pre-registered main variables.
    SymId x() const { return 0; }
    SymId y() const { return 1; }
    SymId t() const { return 2; }
    SymId u() const { return 3; }

    /// Look up a name, registering it as a parameter if unknown (unless strict).
    SymId intern(const std::string& name, bool strict = false);
    std::optional<SymId> lookup(const std::string& name) const;

    SymbolInfo info(SymId id) const;
    std::string name(SymId id) const;
    SymbolKind kind(SymId id) const;
    bool is_tower(SymId id) const;
    bool is_quadratic(SymId id) const { return kind(id) == SymbolKind::TowerSqrt; }
    Polynomial quadratic_rhs(SymId id) const;

    /// exp(arg) as theta^n for an existing entry when arg is an integer multiple,
    /// otherwise a fresh entry (n = 1).
    std::pair<SymId, long> ensure_exp(const RationalFunction& arg);
    SymId ensure_log(const RationalFunction& arg);
    SymId ensure_atan(const RationalFunction& arg);
    SymId ensure_sqrt(const Polynomial& radicand);
    SymId ensure_int(const RationalFunction& integrand, SymId bound_var,
                     const RationalFunction& arg, std::optional<Scalar> basepoint);

    SymId fresh_bound();
    /// Canonical bound variable for integrals over `var` (named "%<var>").
    SymId bound_for(SymId var);

    std::size_t size() const;

    /// Register a named quadratic extension (kappa with kappa^2 = rhs).
    SymId named_sqrt_param(const std::string& name, const Polynomial& rhs);

    /// All registered quadratic radicands, in registration order.
    std::vector<std::pair<SymId, Polynomial>> sqrt_radicands() const;

private:
    SymbolRegistry();
    SymId add(SymbolInfo info, const std::string& dedup_key);

    mutable std::shared_mutex mu_;
    std::vector<SymbolInfo> syms_;
    std::unordered_map<std::string, SymId> by_name_;
    std::unordered_map<std::string, SymId> by_key_;
    std::vector<SymId> exp_entries_;
    unsigned bound_counter_ = 0;
};

inline SymbolRegistry& registry() { return SymbolRegistry::instance(); }

} // namespace abel
