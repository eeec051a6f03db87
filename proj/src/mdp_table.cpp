#include "ngi/mdp.hpp"

#include <sstream>

namespace ngi::mdp {

const char* to_string(Fork f) noexcept
{
    switch (f) {
    case Fork::no_tie: return "noTie";
    case Fork::tie: return "tie";
    case Fork::tie_prime: return "tiePrime";
    }
    return "?";
}

const char* to_string(LastMicro m) noexcept
{
    switch (m) {
    case LastMicro::honest_included: return "H_in";
    case LastMicro::honest_excluded: return "H_ex";
    case LastMicro::selfish_published: return "S_p";
    case LastMicro::selfish_hidden: return "S_h";
    }
    return "?";
}

const char* to_string(Action a) noexcept
{
    switch (a) {
    case Action::adopt: return "adopt";
    case Action::adopt_exclude: return "adoptE";
    case Action::override_publish: return "override";
    case Action::override_hide: return "overrideH";
    case Action::match: return "match";
    case Action::match_hide: return "matchH";
    case Action::wait: return "wait";
    case Action::revert: return "revert";
    }
    return "?";
}

const char* to_string(FeeAccounting f) noexcept
{
    return f == FeeAccounting::fee_conserving ? "fee_conserving" : "as_published";
}

Fork parse_fork(const std::string& text)
{
    for (Fork f : {Fork::no_tie, Fork::tie, Fork::tie_prime}) {
        if (text == to_string(f)) return f;
    }
    throw ValidationError("unknown fork value '" + text + "'");
}

LastMicro parse_last_micro(const std::string& text)
{
    for (LastMicro m : {LastMicro::honest_included, LastMicro::honest_excluded, LastMicro::selfish_published,
                        LastMicro::selfish_hidden}) {
        if (text == to_string(m)) return m;
    }
    throw ValidationError("unknown lastMicroBlock value '" + text + "'");
}

Action parse_action(const std::string& text)
{
    for (int i = 0; i < kActionCount; ++i) {
        const auto a = static_cast<Action>(i);
        if (text == to_string(a)) return a;
    }
    throw ValidationError("unknown action '" + text + "'");
}

std::string to_string(const MdpState& s)
{
    std::ostringstream os;
    os << '(' << s.l_a << ',' << s.l_h << ',' << to_string(s.fork) << ',' << to_string(s.last_micro) << ')';
    return os.str();
}

ScalarReward scalarize(const RewardTuple& reward, const RewardWeights& weights) noexcept
{
    const double selfish = weights.key_weight * reward.r_a + weights.fee_weight * reward.t_a;
    return {selfish, selfish + weights.key_weight * reward.r_h + weights.fee_weight * reward.t_h};
}

// ---------------------------------------------------------------------------

StateSpace::StateSpace(int truncation) : truncation_(truncation)
{
    if (truncation < 2) throw ValidationError("truncation L must be at least 2");
    const int n = truncation + 1;
    lookup_.assign(static_cast<std::size_t>(n) * n * 3 * 4, -1);
    for (int la = 0; la <= truncation; ++la) {
        for (int lh = 0; lh <= truncation; ++lh) {
            for (int f = 0; f < 3; ++f) {
                const auto fork = static_cast<Fork>(f);
                if (fork != Fork::no_tie && !(la >= lh && lh >= 1)) continue;
                for (int m = 0; m < 4; ++m) {
                    const MdpState s{la, lh, fork, static_cast<LastMicro>(m)};
                    lookup_[slot(s)] = static_cast<std::int32_t>(states_.size());
                    states_.push_back(s);
                }
            }
        }
    }
}

std::size_t StateSpace::slot(const MdpState& s) const noexcept
{
    const auto n = static_cast<std::size_t>(truncation_ + 1);
    return ((static_cast<std::size_t>(s.l_a) * n + static_cast<std::size_t>(s.l_h)) * 3 +
            static_cast<std::size_t>(s.fork)) * 4 + static_cast<std::size_t>(s.last_micro);
}

std::optional<std::size_t> StateSpace::index_of(const MdpState& s) const noexcept
{
    if (s.l_a < 0 || s.l_h < 0 || s.l_a > truncation_ || s.l_h > truncation_) return std::nullopt;
    if (static_cast<int>(s.fork) > 2 || static_cast<int>(s.last_micro) > 3) return std::nullopt;
    const std::int32_t idx = lookup_[slot(s)];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

// ---------------------------------------------------------------------------

namespace {

using LM = LastMicro;

class RowBuilder {
public:
    RowBuilder(const ProtocolParams& p, FeeAccounting acc, int truncation)
        : a_(p.alpha), b_(1.0 - p.alpha), g_(p.gamma), r_(p.split_ratio), acc_(acc), L_(truncation)
    {
    }

    std::vector<Choice> choices_for(const MdpState& s) const
    {
        std::vector<Choice> out;
        const bool la_room = s.l_a < L_;
        const bool lh_room = s.l_h < L_;

        if (s.l_h >= 1) {
            out.push_back({Action::adopt, adopt(s, LM::honest_included)});
            out.push_back({Action::adopt_exclude, adopt(s, LM::honest_excluded)});
        }
        if (s.l_a > s.l_h) {
            out.push_back({Action::override_publish, override_rows(s, LM::selfish_published)});
            out.push_back({Action::override_hide, override_rows(s, LM::selfish_hidden)});
        }
        const bool race_ok = la_room && lh_room && s.l_a >= s.l_h && s.l_h >= 1;
        if (s.fork == Fork::no_tie) {
            if (race_ok) {
                out.push_back({Action::match, race(s, false)});
                out.push_back({Action::match_hide, race(s, true)});
            }
            if (la_room && lh_room) {
                out.push_back({Action::wait, {{{s.l_a + 1, s.l_h, Fork::no_tie, s.last_micro}, a_, {}},
                                              {{s.l_a, s.l_h + 1, Fork::no_tie, s.last_micro}, b_, {}}}});
            }
        } else if (race_ok) {
            out.push_back({Action::wait, race(s, s.fork == Fork::tie_prime)});
        }
        if (lh_room) {
            if (s.fork == Fork::tie_prime) {
                out.push_back({Action::revert, {{{s.l_a, s.l_h, Fork::tie, s.last_micro}, 1.0, {}}}});
            } else if (s.last_micro == LM::selfish_hidden && s.l_h == 0) {
                out.push_back({Action::revert, {{{s.l_a, s.l_h, s.fork, LM::selfish_published}, 1.0, {}}}});
            } else if (s.last_micro == LM::honest_excluded && s.l_a == 0) {
                out.push_back({Action::revert, {{{s.l_a, s.l_h, s.fork, LM::honest_included}, 1.0, {}}}});
            }
        }
        return out;
    }

private:
    // adopt / adoptE: the attacker takes the l_h public blocks; the next block
    // is mined on the last of them.
    std::vector<Outcome> adopt(const MdpState& s, LM landing) const
    {
        const double lh = s.l_h;
        RewardTuple rw;
        const bool published = acc_ == FeeAccounting::as_published;
        switch (s.last_micro) {
        case LM::selfish_hidden: rw = {lh, published ? lh : lh - 1.0, 0.0, 0.0}; break;
        case LM::selfish_published: rw = {lh, lh - 1.0 + (1.0 - r_), 0.0, r_}; break;
        case LM::honest_included:
        case LM::honest_excluded: rw = {lh, published ? lh - 1.0 : lh, 0.0, 0.0}; break;
        }
        return {{{1, 0, Fork::no_tie, landing}, a_, rw}, {{0, 1, Fork::no_tie, landing}, b_, rw}};
    }

    // override / overrideH: publish l_h + 1 attacker blocks.
    std::vector<Outcome> override_rows(const MdpState& s, LM landing) const
    {
        const double lh = s.l_h;
        RewardTuple rw;
        const bool published = acc_ == FeeAccounting::as_published;
        switch (s.last_micro) {
        case LM::honest_excluded: rw = {0.0, 0.0, lh + 1.0, published ? lh + 1.0 : lh}; break;
        case LM::honest_included: rw = {0.0, r_, lh + 1.0, lh + (1.0 - r_)}; break;
        case LM::selfish_published:
        case LM::selfish_hidden: rw = {0.0, 0.0, lh + 1.0, published ? lh : lh + 1.0}; break;
        }
        const int rest = s.l_a - s.l_h;
        return {{{rest, 0, Fork::no_tie, landing}, a_, rw}, {{rest - 1, 1, Fork::no_tie, landing}, b_, rw}};
    }

    // match / matchH from noTie, and wait inside an ongoing tie: the three race outcomes.
    std::vector<Outcome> race(const MdpState& s, bool hide) const
    {
        const double lh = s.l_h;
        RewardTuple won;
        switch (s.last_micro) {
        case LM::honest_included: won = {0.0, r_, lh, lh - 1.0 + (1.0 - r_)}; break;
        case LM::honest_excluded: won = {0.0, 0.0, lh, lh - 1.0}; break;
        case LM::selfish_published:
        case LM::selfish_hidden: won = {0.0, 0.0, lh, lh}; break;
        }
        const Fork tie = hide ? Fork::tie_prime : Fork::tie;
        const LM landing = hide ? LM::selfish_hidden : LM::selfish_published;
        return {{{s.l_a + 1, s.l_h, tie, s.last_micro}, a_, {}},
                {{s.l_a - s.l_h, 1, Fork::no_tie, landing}, g_ * b_, won},
                {{s.l_a, s.l_h + 1, Fork::no_tie, s.last_micro}, (1.0 - g_) * b_, {}}};
    }

    double a_, b_, g_, r_;
    FeeAccounting acc_;
    int L_;
};

}  // namespace

TransitionTable::TransitionTable(const ProtocolParams& params, int truncation, FeeAccounting accounting)
    : params_(validate(params)), accounting_(accounting), space_(truncation)
{
    const RowBuilder rows(params_, accounting_, truncation);
    begin_.reserve(space_.size() + 1);
    begin_.push_back(0);
    for (const MdpState& s : space_.states()) {
        for (Choice& c : rows.choices_for(s)) choices_.push_back(std::move(c));
        begin_.push_back(choices_.size());
    }
}

std::span<const Choice> TransitionTable::choices(std::size_t state_index) const
{
    if (state_index >= space_.size()) throw std::out_of_range("state index out of range");
    return std::span<const Choice>(choices_).subspan(begin_[state_index], begin_[state_index + 1] - begin_[state_index]);
}

std::span<const Choice> TransitionTable::choices(const MdpState& s) const
{
    const auto idx = space_.index_of(s);
    if (!idx) throw std::out_of_range("state " + to_string(s) + " outside the state space");
    return choices(*idx);
}

const Choice* TransitionTable::find(const MdpState& s, Action a) const
{
    const auto idx = space_.index_of(s);
    if (!idx) return nullptr;
    for (const Choice& c : choices(*idx)) {
        if (c.action == a) return &c;
    }
    return nullptr;
}

TransitionTable build_transitions(const ProtocolParams& params, int truncation, FeeAccounting accounting)
{
    return TransitionTable(params, truncation, accounting);
}

}  // namespace ngi::mdp
