#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synckit {

enum class ErrorKind {
    TypePairMismatch,
    DuplicateCellId,
    UnknownCellInEdge,
    MalformedDocument,
    PartitionDomainMismatch,
    DomainMismatch,
    NotARefinement,
    UnknownCell,
    NotTypeRefining,
    TooLarge,
    NotBalanced,
    NotInLattice,
    EmptyColor,
    UnsupportedMonoid,
    NumericalBlowup,
    PreconditionFailed,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::TypePairMismatch: return "TypePairMismatch";
    case ErrorKind::DuplicateCellId: return "DuplicateCellId";
    case ErrorKind::UnknownCellInEdge: return "UnknownCellInEdge";
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::PartitionDomainMismatch: return "PartitionDomainMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotARefinement: return "NotARefinement";
    case ErrorKind::UnknownCell: return "UnknownCell";
    case ErrorKind::NotTypeRefining: return "NotTypeRefining";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotBalanced: return "NotBalanced";
    case ErrorKind::NotInLattice: return "NotInLattice";
    case ErrorKind::EmptyColor: return "EmptyColor";
    case ErrorKind::UnsupportedMonoid: return "UnsupportedMonoid";
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    }
    return "Unknown";
}

/// Every failure raised by the library. The kind is stable and meant for
/// programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace synckit
