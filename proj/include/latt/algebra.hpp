#pragma once

#include <string>
#include <vector>

#include "latt/lattice.hpp"

namespace latt {

/// A finitary operation on a lattice carrier, as a flat table indexed in
/// mixed radix over the argument tuple (first argument most significant,
/// matching direct_product's tuple indexing). Arity 0 is a constant.
struct Operation {
    std::string name;
    std::size_t arity = 0;
    std::vector<std::uint32_t> table;

    static std::size_t table_size(std::size_t carrier, std::size_t arity) {
        std::size_t s = 1;
        for (std::size_t i = 0; i < arity; ++i) s *= carrier;
        return s;
    }

    std::size_t apply(std::size_t carrier, const std::vector<std::size_t>& args) const {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < arity; ++j) idx = idx * carrier + args[j];
        return table[idx];
    }
};

/// A bounded lattice with extra named operations.
struct LatticeBasedAlgebra {
    LatticePtr lattice;
    std::vector<Operation> ops;

    LatticeBasedAlgebra() = default;
    LatticeBasedAlgebra(LatticePtr lat, std::vector<Operation> extra = {})
        : lattice(std::move(lat)), ops(std::move(extra)) {
        for (const auto& op : ops) {
            if (op.table.size() != Operation::table_size(lattice->size(), op.arity))
                throw Error(Errc::invalid_argument,
                            "operation '" + op.name + "' table is not total");
            for (auto v : op.table)
                if (v >= lattice->size())
                    throw Error(Errc::invalid_argument,
                                "operation '" + op.name + "' table entry out of range");
        }
    }

    const Operation* find_op(const std::string& name) const {
        for (const auto& op : ops)
            if (op.name == name) return &op;
        return nullptr;
    }
};

}  // namespace latt
