#pragma once

#include "sybilsim/types.hpp"

#include <map>
#include <optional>
#include <vector>

namespace sybilsim::inline SYBILSIM_ABI
{

/// Coins minted per round. A node mints exactly one coin in every round it
/// participates, so the ledger is a 0/1 flag per round since birth.
class MintLedger
{
  public:
    MintLedger() = default;
    explicit MintLedger(Round birth) : birth_(birth)
    {
    }

    void record(Round t);

    /// 1 if the node minted at round t, else 0.
    int at(Round t) const;

    std::uint64_t
    total() const
    {
        return total_;
    }

  private:
    Round birth_ = 0;
    std::vector<bool> minted_;
    std::uint64_t total_ = 0;
};

/// Outstanding fine keyed by the mint round it was attributed to. Only
/// strictly positive entries are stored.
class FineLedger
{
  public:
    using Map = std::map<Round, Amount>;

    Amount at(Round t2) const;
    Amount total() const;
    bool
    empty() const
    {
        return entries_.empty();
    }
    Map const&
    entries() const
    {
        return entries_;
    }

    void add(Round t2, Amount const& amount);
    /// Overwrites the entry; zero erases it.
    void set(Round t2, Amount const& amount);
    /// Removes and returns the entry (zero if absent).
    Amount take(Round t2);
    /// Removes everything; returns the entries that were present.
    Map takeAll();

  private:
    Map entries_;
};

struct NodeRecord
{
    NodeId id;
    NodeType type = NodeType::Honest;
    bool exposed = false;
    Round birth = 0;
    /// Round at which the node left the live graph, either as a dead genuine
    /// identity or as an exposed sybil removed by the transition.
    std::optional<Round> death;
    MintLedger mints;
    FineLedger fines;

    bool
    alive() const
    {
        return !death.has_value();
    }

    /// Alive and unexposed: mints, pays, and may receive fines.
    bool
    participating() const
    {
        return alive() && !exposed;
    }
};

/// Every node that ever existed, indexed by id. Append-only.
class NodeTable
{
  public:
    NodeId create(NodeType type, Round birth);

    NodeRecord& operator[](NodeId id);
    NodeRecord const& operator[](NodeId id) const;

    bool
    contains(NodeId id) const
    {
        return id.value < records_.size();
    }
    std::size_t
    size() const
    {
        return records_.size();
    }

    auto
    begin() const
    {
        return records_.begin();
    }
    auto
    end() const
    {
        return records_.end();
    }

  private:
    std::vector<NodeRecord> records_;
};

} // namespace sybilsim::inline SYBILSIM_ABI
