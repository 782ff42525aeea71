#pragma once

#include "sybilsim/graph.hpp"
#include "sybilsim/node.hpp"
#include "sybilsim/types.hpp"

#include <map>
#include <set>
#include <string_view>
#include <vector>

namespace sybilsim::inline SYBILSIM_ABI
{

struct EconomyState
{
    Amount inCirculation{};
    Amount taxCollected{};
    Amount burned{};
    Amount genuineMinted{};
    Amount sybilMinted{};
    /// Fine that can no longer be collected: empty boundaries and debts of
    /// genuine identities that ceased.
    Amount lostFine{};

    /// Sybil coins not yet burned. Equals C + X - genuine minted.
    Amount
    excess() const
    {
        return sybilMinted - burned;
    }
};

enum class Variant
{
    /// One fine bucket per node, fixed graph.
    Static,
    /// Per-mint-round fines, fine split among the boundary.
    Regenerating,
    /// Per-mint-round fines, all current payers of that round share equally.
    RegeneratingModified,
    /// Regenerating accounting with random exposure and mortal genuine nodes.
    Probabilistic
};

std::string_view variantName(Variant v);
Variant parseVariant(std::string_view s);

struct ProtocolVariant
{
    Variant kind = Variant::Static;
    /// Fine multiplier per coin minted by an exposed sybil.
    Amount alpha = 2;

    bool
    perRoundFines() const
    {
        return kind != Variant::Static;
    }
    bool
    equalShares() const
    {
        return kind == Variant::RegeneratingModified;
    }
};

struct MintReport
{
    Amount paid{};
    Amount circulated{};
};

struct FineShare
{
    Round mintRound = 0;
    Amount fine{};
    std::vector<NodeId> recipients;
    /// True when nobody could take the fine and it went to lostFine.
    bool lost = false;
};

struct FineReport
{
    NodeId sybil;
    Amount total{};
    std::vector<FineShare> shares;
};

/// Coin accounting for one community.
///
/// All fine-ledger mutations go through this class so the per-round indices
/// (current payers, paid and lost amounts) stay consistent with the node
/// records.
class Economy
{
  public:
    explicit Economy(ProtocolVariant variant);

    ProtocolVariant const&
    variant() const
    {
        return variant_;
    }
    EconomyState const&
    state() const
    {
        return state_;
    }

    /// Mints one coin for a participating node, then spends up to that one
    /// coin on its fines, oldest mint round first. Each paid unit is split
    /// evenly into burn and tax; whatever is left circulates.
    MintReport mintAndPay(NodeRecord& node, Round t);

    /// Static protocol: exposes u and spreads alpha * (coins u minted) plus
    /// u's outstanding fine over its conditional boundary in the live graph.
    FineReport imposeFineStatic(NodeId u, CommunityGraph const& g,
                                NodeTable& nodes);

    /// Per-round protocols: exposes u at round t and, for every round
    /// t2 in [birth, t], fines the conditional boundary of u in G_t2 for
    /// alpha * m_{u,t2} + f_{u,t2}. The coin u minted at t itself is
    /// included since u minted it before being exposed.
    FineReport imposeFinePerRound(NodeId u, Round t, HistoryStore const& history,
                                  NodeTable& nodes);

    /// A genuine identity ceased: its outstanding fines become lost.
    Amount forfeit(NodeRecord& node);

    /// Total fine still owed, attributed to mint round t2.
    Amount unpaidAt(Round t2) const;
    Amount unpaidTotal() const;
    /// Fine paid, attributed to each mint round.
    std::map<Round, Amount> const&
    paidByRound() const
    {
        return paid_;
    }
    std::map<Round, Amount> const&
    lostByRound() const
    {
        return lost_;
    }
    /// Nodes currently owing fine for mint round t2.
    std::set<NodeId> const& payersAt(Round t2) const;

    /// C + X + burned == total minted and burned == X.
    bool conserves() const;

  private:
    void credit(NodeRecord& node, Round t2, Amount const& amount);
    void assign(NodeRecord& node, Round t2, Amount const& amount);
    Amount clear(NodeRecord& node, Round t2);
    void loseFine(Round t2, Amount const& amount);

    ProtocolVariant variant_;
    EconomyState state_;
    std::map<Round, std::set<NodeId>> payers_;
    std::map<Round, Amount> unpaid_;
    std::map<Round, Amount> paid_;
    std::map<Round, Amount> lost_;
};

} // namespace sybilsim::inline SYBILSIM_ABI
