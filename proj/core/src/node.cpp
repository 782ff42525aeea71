#include "sybilsim/node.hpp"

#include "sybilsim/errors.hpp"

#include <stdexcept>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

void
MintLedger::record(Round t)
{
    if (t < birth_)
    {
        throw std::invalid_argument("mint before birth");
    }
    auto const offset = static_cast<std::size_t>(t - birth_);
    if (minted_.size() <= offset)
    {
        minted_.resize(offset + 1, false);
    }
    if (!minted_[offset])
    {
        minted_[offset] = true;
        ++total_;
    }
}

int
MintLedger::at(Round t) const
{
    if (t < birth_)
    {
        return 0;
    }
    auto const offset = static_cast<std::size_t>(t - birth_);
    return offset < minted_.size() && minted_[offset] ? 1 : 0;
}

Amount
FineLedger::at(Round t2) const
{
    auto it = entries_.find(t2);
    return it == entries_.end() ? Amount(0) : it->second;
}

Amount
FineLedger::total() const
{
    Amount sum = 0;
    for (auto const& [_, f] : entries_)
    {
        sum += f;
    }
    return sum;
}

void
FineLedger::add(Round t2, Amount const& amount)
{
    if (sign(amount) < 0)
    {
        throw std::invalid_argument("negative fine");
    }
    if (sign(amount) == 0)
    {
        return;
    }
    entries_[t2] += amount;
}

void
FineLedger::set(Round t2, Amount const& amount)
{
    if (sign(amount) < 0)
    {
        throw std::invalid_argument("negative fine");
    }
    if (sign(amount) == 0)
    {
        entries_.erase(t2);
    }
    else
    {
        entries_[t2] = amount;
    }
}

Amount
FineLedger::take(Round t2)
{
    auto node = entries_.extract(t2);
    return node ? node.mapped() : Amount(0);
}

FineLedger::Map
FineLedger::takeAll()
{
    Map out;
    out.swap(entries_);
    return out;
}

NodeId
NodeTable::create(NodeType type, Round birth)
{
    NodeId id{static_cast<std::uint32_t>(records_.size())};
    NodeRecord r;
    r.id = id;
    r.type = type;
    r.birth = birth;
    r.mints = MintLedger(birth);
    records_.push_back(std::move(r));
    return id;
}

NodeRecord&
NodeTable::operator[](NodeId id)
{
    if (!contains(id))
    {
        throw QueryError("unknown node " + std::to_string(id.value));
    }
    return records_[id.value];
}

NodeRecord const&
NodeTable::operator[](NodeId id) const
{
    if (!contains(id))
    {
        throw QueryError("unknown node " + std::to_string(id.value));
    }
    return records_[id.value];
}

} // namespace sybilsim::inline SYBILSIM_ABI
