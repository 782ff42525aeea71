#include "sybilsim/economy.hpp"

#include "sybilsim/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

std::string_view
variantName(Variant v)
{
    switch (v)
    {
    case Variant::Static:
        return "static";
    case Variant::Regenerating:
        return "regenerating";
    case Variant::RegeneratingModified:
        return "regenerating-modified";
    case Variant::Probabilistic:
        return "probabilistic";
    }
    return "?";
}

Variant
parseVariant(std::string_view s)
{
    for (auto v : {Variant::Static, Variant::Regenerating,
                   Variant::RegeneratingModified, Variant::Probabilistic})
    {
        if (variantName(v) == s)
            return v;
    }
    throw std::invalid_argument("unknown protocol variant '" + std::string(s) +
                                "'");
}

Economy::Economy(ProtocolVariant variant) : variant_(std::move(variant))
{
    if (variant_.alpha < 1)
        throw ConfigError("alpha must be at least 1");
}

void
Economy::credit(NodeRecord& node, Round t2, Amount const& amount)
{
    if (sign(amount) == 0)
        return;
    node.fines.add(t2, amount);
    payers_[t2].insert(node.id);
    unpaid_[t2] += amount;
}

void
Economy::assign(NodeRecord& node, Round t2, Amount const& amount)
{
    Amount const old = node.fines.at(t2);
    node.fines.set(t2, amount);
    if (sign(amount) > 0)
        payers_[t2].insert(node.id);
    else if (auto it = payers_.find(t2); it != payers_.end())
    {
        it->second.erase(node.id);
        if (it->second.empty())
            payers_.erase(it);
    }
    Amount& u = unpaid_[t2];
    u += amount - old;
    if (sign(u) == 0)
        unpaid_.erase(t2);
}

Amount
Economy::clear(NodeRecord& node, Round t2)
{
    Amount f = node.fines.take(t2);
    if (sign(f) == 0)
        return f;
    if (auto it = payers_.find(t2); it != payers_.end())
    {
        it->second.erase(node.id);
        if (it->second.empty())
            payers_.erase(it);
    }
    Amount& u = unpaid_[t2];
    u -= f;
    if (sign(u) == 0)
        unpaid_.erase(t2);
    return f;
}

void
Economy::loseFine(Round t2, Amount const& amount)
{
    state_.lostFine += amount;
    lost_[t2] += amount;
}

MintReport
Economy::mintAndPay(NodeRecord& node, Round t)
{
    if (!node.participating())
    {
        throw std::logic_error("mint by non-participating node " +
                               std::to_string(node.id.value));
    }
    node.mints.record(t);
    if (isGenuine(node.type))
        state_.genuineMinted += 1;
    else
        state_.sybilMinted += 1;

    MintReport r;
    Amount budget = 1;
    while (sign(budget) > 0 && !node.fines.empty())
    {
        auto const oldest = node.fines.entries().begin();
        Round const round = oldest->first;
        Amount const owed = oldest->second;
        Amount const pay = owed < budget ? owed : budget;
        assign(node, round, owed - pay);
        budget -= pay;
        r.paid += pay;
        paid_[round] += pay;
        Amount const half = pay / 2;
        state_.taxCollected += half;
        state_.burned += half;
    }
    state_.inCirculation += budget;
    r.circulated = budget;
    return r;
}

FineReport
Economy::imposeFineStatic(NodeId u, CommunityGraph const& g, NodeTable& nodes)
{
    auto& rec = nodes[u];
    if (rec.type != NodeType::Sybil || !rec.participating())
    {
        throw std::logic_error("exposing node " + std::to_string(u.value) +
                               " that is not a participating sybil");
    }
    rec.exposed = true;

    FineReport report;
    report.sybil = u;
    Amount fine = variant_.alpha * static_cast<unsigned long>(rec.mints.total());
    for (auto const& [t2, _] : FineLedger::Map(rec.fines.entries()))
        fine += clear(rec, t2);
    report.total = fine;
    if (sign(fine) == 0)
        return report;

    FineShare share;
    share.mintRound = 0;
    share.fine = fine;
    share.recipients = conditionalBoundary(g, nodes, u);
    if (share.recipients.empty())
    {
        share.lost = true;
        loseFine(0, fine);
    }
    else
    {
        Amount const each =
            fine / static_cast<unsigned long>(share.recipients.size());
        for (NodeId w : share.recipients)
            credit(nodes[w], 0, each);
    }
    report.shares.push_back(std::move(share));
    return report;
}

FineReport
Economy::imposeFinePerRound(NodeId u, Round t, HistoryStore const& history,
                            NodeTable& nodes)
{
    auto& rec = nodes[u];
    if (rec.type != NodeType::Sybil || !rec.participating())
    {
        throw std::logic_error("exposing node " + std::to_string(u.value) +
                               " that is not a participating sybil");
    }
    rec.exposed = true;

    FineReport report;
    report.sybil = u;
    for (Round t2 = rec.birth; t2 <= t; ++t2)
    {
        Amount fine = variant_.alpha * rec.mints.at(t2) + clear(rec, t2);
        if (sign(fine) == 0)
            continue;
        report.total += fine;

        FineShare share;
        share.mintRound = t2;
        share.fine = fine;
        auto boundary = conditionalBoundary(history, nodes, u, t2);

        if (variant_.equalShares())
        {
            std::vector<NodeId> payers = boundary;
            if (auto it = payers_.find(t2); it != payers_.end())
            {
                std::vector<NodeId> merged;
                std::set_union(payers.begin(), payers.end(), it->second.begin(),
                               it->second.end(), std::back_inserter(merged));
                payers.swap(merged);
            }
            if (payers.empty())
            {
                share.lost = true;
                loseFine(t2, fine);
            }
            else
            {
                Amount pool = fine;
                for (NodeId w : payers)
                    pool += nodes[w].fines.at(t2);
                Amount const each = pool / static_cast<unsigned long>(payers.size());
                for (NodeId w : payers)
                    assign(nodes[w], t2, each);
            }
            share.recipients = std::move(payers);
        }
        else
        {
            if (boundary.empty())
            {
                share.lost = true;
                loseFine(t2, fine);
            }
            else
            {
                Amount const each =
                    fine / static_cast<unsigned long>(boundary.size());
                for (NodeId w : boundary)
                    credit(nodes[w], t2, each);
            }
            share.recipients = std::move(boundary);
        }
        report.shares.push_back(std::move(share));
    }
    if (!rec.fines.empty())
    {
        throw InvariantViolation("sybil " + std::to_string(u.value) +
                                 " holds fine outside its lifetime");
    }
    return report;
}

Amount
Economy::forfeit(NodeRecord& node)
{
    Amount total{};
    for (auto const& [t2, _] : FineLedger::Map(node.fines.entries()))
    {
        Amount f = clear(node, t2);
        total += f;
        loseFine(t2, f);
    }
    return total;
}

Amount
Economy::unpaidAt(Round t2) const
{
    auto it = unpaid_.find(t2);
    return it == unpaid_.end() ? Amount(0) : it->second;
}

Amount
Economy::unpaidTotal() const
{
    Amount sum{};
    for (auto const& [_, f] : unpaid_)
        sum += f;
    return sum;
}

std::set<NodeId> const&
Economy::payersAt(Round t2) const
{
    static std::set<NodeId> const none;
    auto it = payers_.find(t2);
    return it == payers_.end() ? none : it->second;
}

bool
Economy::conserves() const
{
    auto const& s = state_;
    return approxEqual(s.inCirculation + s.taxCollected + s.burned,
                       s.genuineMinted + s.sybilMinted) &&
           approxEqual(s.burned, s.taxCollected);
}

} // namespace sybilsim::inline SYBILSIM_ABI
