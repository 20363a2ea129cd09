#pragma once

#include "expderiv/error.hpp"

#include <optional>

/// Kind of the expderiv::Error raised by f, or nullopt when f returns normally.
template <class F>
std::optional<expderiv::ErrorKind> thrown_kind(F&& f) {
    try {
        f();
    } catch (const expderiv::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}
