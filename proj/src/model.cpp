#include "cofix/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cofix {

using nlohmann::json;

double ProbModel::mass(int state) const {
    double m = 0.0;
    for (const auto& [_, w] : step[static_cast<std::size_t>(state)]) m += w;
    return m;
}

std::vector<double> ProbModel::stepRow(int state) const {
    std::vector<double> row(states.size(), 0.0);
    for (const auto& [y, w] : step[static_cast<std::size_t>(state)]) row[static_cast<std::size_t>(y)] += w;
    return row;
}

ModelKind kindOf(const Model& m) {
    if (std::holds_alternative<KripkeModel>(m)) return ModelKind::Kripke;
    if (std::holds_alternative<LabeledModel>(m)) return ModelKind::Labeled;
    return ModelKind::Prob;
}

const std::vector<std::string>& statesOf(const Model& m) {
    return std::visit([](const auto& x) -> const std::vector<std::string>& { return x.states; }, m);
}

int stateCount(const Model& m) { return static_cast<int>(statesOf(m).size()); }

int stateIndex(const Model& m, const std::string& name) {
    const auto& states = statesOf(m);
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw UserError("unknown state '" + name + "'");
    return static_cast<int>(it - states.begin());
}

LatticeContext latticeContextOf(const Model& m) {
    return kindOf(m) == ModelKind::Prob ? LatticeContext::quantitative(stateCount(m))
                                        : LatticeContext::set(stateCount(m));
}

Predicate atomPredicate(const Model& m, const std::string& name) {
    int n = stateCount(m);
    if (const auto* k = std::get_if<KripkeModel>(&m)) {
        auto it = k->props.find(name);
        return it == k->props.end() ? Predicate::emptySet(n) : it->second;
    }
    if (const auto* l = std::get_if<LabeledModel>(&m)) {
        auto it = l->props.find(name);
        return it == l->props.end() ? Predicate::emptySet(n) : it->second;
    }
    const auto& p = std::get<ProbModel>(m);
    auto it = p.payout.find(name);
    return it == p.payout.end() ? Predicate::zeros(n) : Predicate::fromValues(it->second);
}

Predicate StateMap::preimage(const Predicate& target, int sourceWidth) const {
    Predicate out = Predicate::emptySet(sourceWidth);
    for (int s = 0; s < sourceWidth; ++s)
        if (target.test(apply(s))) out.set(s);
    return out;
}

StateMap identityMap(const Model& m) {
    StateMap f;
    f.map.resize(static_cast<std::size_t>(stateCount(m)));
    for (int i = 0; i < stateCount(m); ++i) f.map[static_cast<std::size_t>(i)] = i;
    return f;
}

namespace {

json parseJson(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw UserError("malformed JSON document");
    return doc;
}

std::vector<std::string> readStates(const json& doc) {
    if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty())
        throw UserError("model needs a non-empty \"states\" array");
    std::vector<std::string> states;
    std::set<std::string> seen;
    for (const auto& s : doc["states"]) {
        if (!s.is_string()) throw UserError("state names must be strings");
        if (!seen.insert(s.get<std::string>()).second)
            throw UserError("duplicate state '" + s.get<std::string>() + "'");
        states.push_back(s.get<std::string>());
    }
    return states;
}

int indexOf(const std::vector<std::string>& states, const std::string& name) {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw UserError("reference to undeclared state '" + name + "'");
    return static_cast<int>(it - states.begin());
}

Predicate readStateSet(const std::vector<std::string>& states, const json& arr) {
    if (!arr.is_array()) throw UserError("state set must be an array of state names");
    Predicate p = Predicate::emptySet(static_cast<int>(states.size()));
    for (const auto& s : arr) {
        if (!s.is_string()) throw UserError("state names must be strings");
        p.set(indexOf(states, s.get<std::string>()));
    }
    return p;
}

std::map<std::string, Predicate> readProps(const std::vector<std::string>& states, const json& doc) {
    std::map<std::string, Predicate> props;
    if (!doc.contains("props")) return props;
    if (!doc["props"].is_object()) throw UserError("\"props\" must be an object");
    for (const auto& [name, arr] : doc["props"].items())
        props.emplace(name, readStateSet(states, arr));
    return props;
}

} // namespace

Model loadModel(const std::string& jsonText) {
    json doc = parseJson(jsonText);
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw UserError("model document needs a \"kind\" field");
    std::string kind = doc["kind"].get<std::string>();
    auto states = readStates(doc);
    int n = static_cast<int>(states.size());

    if (kind == "kripke") {
        KripkeModel m;
        m.states = states;
        m.props = readProps(states, doc);
        m.succ.assign(static_cast<std::size_t>(n), Predicate::emptySet(n));
        if (doc.contains("succ")) {
            if (!doc["succ"].is_object()) throw UserError("\"succ\" must be an object");
            for (const auto& [from, arr] : doc["succ"].items())
                m.succ[static_cast<std::size_t>(indexOf(states, from))] = readStateSet(states, arr);
        }
        return m;
    }

    if (kind == "labeled") {
        LabeledModel m;
        m.states = states;
        m.props = readProps(states, doc);
        if (!doc.contains("labels") || !doc["labels"].is_array())
            throw UserError("labeled model needs a \"labels\" array");
        std::set<std::string> seen;
        for (const auto& l : doc["labels"]) {
            if (!l.is_string()) throw UserError("labels must be strings");
            if (!seen.insert(l.get<std::string>()).second)
                throw UserError("duplicate label '" + l.get<std::string>() + "'");
            m.labels.push_back(l.get<std::string>());
        }
        m.succ.assign(m.labels.size(),
                      std::vector<Predicate>(static_cast<std::size_t>(n), Predicate::emptySet(n)));
        if (doc.contains("succ")) {
            if (!doc["succ"].is_object()) throw UserError("\"succ\" must be an object");
            for (const auto& [label, perState] : doc["succ"].items()) {
                auto lit = std::find(m.labels.begin(), m.labels.end(), label);
                if (lit == m.labels.end()) throw UserError("undeclared label '" + label + "'");
                if (!perState.is_object()) throw UserError("per-label \"succ\" must be an object");
                auto li = static_cast<std::size_t>(lit - m.labels.begin());
                for (const auto& [from, arr] : perState.items())
                    m.succ[li][static_cast<std::size_t>(indexOf(states, from))] =
                        readStateSet(states, arr);
            }
        }
        return m;
    }

    if (kind == "prob") {
        ProbModel m;
        m.states = states;
        if (doc.contains("payoutLabels")) {
            if (!doc["payoutLabels"].is_array()) throw UserError("\"payoutLabels\" must be an array");
            for (const auto& l : doc["payoutLabels"]) m.payoutLabels.push_back(l.get<std::string>());
        }
        for (const auto& label : m.payoutLabels)
            m.payout.emplace(label, std::vector<double>(static_cast<std::size_t>(n), 0.0));
        if (doc.contains("payout")) {
            if (!doc["payout"].is_object()) throw UserError("\"payout\" must be an object");
            for (const auto& [label, perState] : doc["payout"].items()) {
                auto it = m.payout.find(label);
                if (it == m.payout.end()) throw UserError("undeclared payout label '" + label + "'");
                for (const auto& [state, v] : perState.items()) {
                    if (!v.is_number()) throw UserError("payout values must be numbers");
                    double d = v.get<double>();
                    if (!(d >= 0.0 && d <= 1.0))
                        throw UserError("payout " + std::to_string(d) + " outside [0,1]");
                    it->second[static_cast<std::size_t>(indexOf(states, state))] = d;
                }
            }
        }
        m.step.assign(static_cast<std::size_t>(n), {});
        if (doc.contains("step")) {
            if (!doc["step"].is_object()) throw UserError("\"step\" must be an object");
            for (const auto& [from, dist] : doc["step"].items()) {
                int fi = indexOf(states, from);
                if (!dist.is_object()) throw UserError("per-state \"step\" must be an object");
                double mass = 0.0;
                for (const auto& [to, w] : dist.items()) {
                    if (!w.is_number()) throw UserError("step weights must be numbers");
                    double d = w.get<double>();
                    if (!(d >= 0.0 && d <= 1.0))
                        throw UserError("step weight " + std::to_string(d) + " outside [0,1]");
                    m.step[static_cast<std::size_t>(fi)].emplace_back(indexOf(states, to), d);
                    mass += d;
                }
                if (mass > 1.0 + kProbTolerance)
                    throw UserError("subdistribution mass " + std::to_string(mass) + " exceeds 1 at state '" +
                                    from + "'");
                std::sort(m.step[static_cast<std::size_t>(fi)].begin(),
                          m.step[static_cast<std::size_t>(fi)].end());
            }
        }
        return m;
    }

    throw UserError("unknown model kind '" + kind + "' (expected kripke|labeled|prob)");
}

Model loadModelFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return loadModel(ss.str());
}

std::string serializeModel(const Model& m) {
    json doc;
    const auto& states = statesOf(m);
    doc["states"] = states;
    auto setToNames = [&](const Predicate& p) {
        json arr = json::array();
        for (int i : p.members()) arr.push_back(states[static_cast<std::size_t>(i)]);
        return arr;
    };
    if (const auto* k = std::get_if<KripkeModel>(&m)) {
        doc["kind"] = "kripke";
        json props = json::object();
        for (const auto& [name, val] : k->props) props[name] = setToNames(val);
        doc["props"] = props;
        json succ = json::object();
        for (std::size_t i = 0; i < states.size(); ++i) succ[states[i]] = setToNames(k->succ[i]);
        doc["succ"] = succ;
    } else if (const auto* l = std::get_if<LabeledModel>(&m)) {
        doc["kind"] = "labeled";
        json props = json::object();
        for (const auto& [name, val] : l->props) props[name] = setToNames(val);
        doc["props"] = props;
        doc["labels"] = l->labels;
        json succ = json::object();
        for (std::size_t li = 0; li < l->labels.size(); ++li) {
            json perState = json::object();
            for (std::size_t i = 0; i < states.size(); ++i)
                perState[states[i]] = setToNames(l->succ[li][i]);
            succ[l->labels[li]] = perState;
        }
        doc["succ"] = succ;
    } else {
        const auto& p = std::get<ProbModel>(m);
        doc["kind"] = "prob";
        doc["payoutLabels"] = p.payoutLabels;
        json payout = json::object();
        for (const auto& [label, vals] : p.payout) {
            json perState = json::object();
            for (std::size_t i = 0; i < states.size(); ++i) perState[states[i]] = vals[i];
            payout[label] = perState;
        }
        doc["payout"] = payout;
        json step = json::object();
        for (std::size_t i = 0; i < states.size(); ++i) {
            json dist = json::object();
            for (const auto& [to, w] : p.step[i]) dist[states[static_cast<std::size_t>(to)]] = w;
            step[states[i]] = dist;
        }
        doc["step"] = step;
    }
    return doc.dump(2);
}

StateMap parseStateMap(const Model& source, const Model& target, const std::string& jsonText) {
    json doc = parseJson(jsonText);
    if (!doc.is_object() || !doc.contains("map") || !doc["map"].is_object())
        throw UserError("map document needs a \"map\" object");
    StateMap f;
    f.map.assign(statesOf(source).size(), -1);
    for (const auto& [src, tgt] : doc["map"].items()) {
        if (!tgt.is_string()) throw UserError("map targets must be state names");
        f.map[static_cast<std::size_t>(stateIndex(source, src))] =
            stateIndex(target, tgt.get<std::string>());
    }
    for (std::size_t i = 0; i < f.map.size(); ++i)
        if (f.map[i] < 0)
            throw UserError("map is not total: no image for state '" + statesOf(source)[i] + "'");
    return f;
}

namespace {

bool samePropNames(const std::map<std::string, Predicate>& a,
                   const std::map<std::string, Predicate>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [name, _] : a)
        if (!b.count(name)) return false;
    return true;
}

Predicate imageOf(const Predicate& src, const StateMap& f, int targetWidth) {
    Predicate out = Predicate::emptySet(targetWidth);
    for (int s : src.members()) out.set(f.apply(s));
    return out;
}

} // namespace

MorphismVerdict checkMorphism(const Model& source, const Model& target, const StateMap& f) {
    if (kindOf(source) != kindOf(target)) throw UserError("signature mismatch between models");
    int n1 = stateCount(source);
    int n2 = stateCount(target);
    if (static_cast<int>(f.map.size()) != n1) throw UserError("state map is not total on the source");
    for (int s = 0; s < n1; ++s)
        if (f.apply(s) < 0 || f.apply(s) >= n2)
            throw UserError("state map image out of target range");

    auto propViolation = [&](const std::map<std::string, Predicate>& p1,
                             const std::map<std::string, Predicate>& p2) -> MorphismVerdict {
        if (!samePropNames(p1, p2)) throw UserError("signature mismatch: proposition sets differ");
        for (const auto& [name, v1] : p1) {
            const Predicate& v2 = p2.at(name);
            for (int s = 0; s < n1; ++s)
                if (v1.test(s) != v2.test(f.apply(s)))
                    return {false, s, "prop", "proposition '" + name + "' differs at image"};
        }
        return {};
    };

    if (const auto* k1 = std::get_if<KripkeModel>(&source)) {
        const auto& k2 = std::get<KripkeModel>(target);
        if (auto v = propViolation(k1->props, k2.props); !v.ok) return v;
        for (int s = 0; s < n1; ++s)
            if (imageOf(k1->succ[static_cast<std::size_t>(s)], f, n2) !=
                k2.succ[static_cast<std::size_t>(f.apply(s))])
                return {false, s, "step", "successor image differs"};
        return {};
    }

    if (const auto* l1 = std::get_if<LabeledModel>(&source)) {
        const auto& l2 = std::get<LabeledModel>(target);
        if (l1->labels != l2.labels) throw UserError("signature mismatch: label sets differ");
        if (auto v = propViolation(l1->props, l2.props); !v.ok) return v;
        for (std::size_t li = 0; li < l1->labels.size(); ++li)
            for (int s = 0; s < n1; ++s)
                if (imageOf(l1->succ[li][static_cast<std::size_t>(s)], f, n2) !=
                    l2.succ[li][static_cast<std::size_t>(f.apply(s))])
                    return {false, s, "step", "successor image differs on label '" + l1->labels[li] + "'"};
        return {};
    }

    const auto& p1 = std::get<ProbModel>(source);
    const auto& p2 = std::get<ProbModel>(target);
    if (p1.payoutLabels != p2.payoutLabels)
        throw UserError("signature mismatch: payout label sets differ");
    for (const auto& label : p1.payoutLabels) {
        const auto& a1 = p1.payout.at(label);
        const auto& a2 = p2.payout.at(label);
        for (int s = 0; s < n1; ++s)
            if (std::fabs(a1[static_cast<std::size_t>(s)] -
                          a2[static_cast<std::size_t>(f.apply(s))]) > kProbTolerance)
                return {false, s, "prop", "payout '" + label + "' differs at image"};
    }
    for (int s = 0; s < n1; ++s) {
        std::vector<double> push(static_cast<std::size_t>(n2), 0.0);
        for (const auto& [y, w] : p1.step[static_cast<std::size_t>(s)])
            push[static_cast<std::size_t>(f.apply(y))] += w;
        std::vector<double> tgt(static_cast<std::size_t>(n2), 0.0);
        for (const auto& [y, w] : p2.step[static_cast<std::size_t>(f.apply(s))])
            tgt[static_cast<std::size_t>(y)] += w;
        for (int y = 0; y < n2; ++y)
            if (std::fabs(push[static_cast<std::size_t>(y)] - tgt[static_cast<std::size_t>(y)]) >
                kProbTolerance)
                return {false, s, "step", "pushforward distribution differs"};
    }
    return {};
}

QuotientOutcome quotientByKernel(const Model& m, const std::vector<std::vector<int>>& partition) {
    int n = stateCount(m);
    std::vector<int> blockOf(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < partition.size(); ++b) {
        if (partition[b].empty()) throw UserError("partition blocks must be non-empty");
        for (int s : partition[b]) {
            if (s < 0 || s >= n) throw UserError("partition references state index out of range");
            if (blockOf[static_cast<std::size_t>(s)] != -1)
                throw UserError("partition blocks overlap at state index " + std::to_string(s));
            blockOf[static_cast<std::size_t>(s)] = static_cast<int>(b);
        }
    }
    for (int s = 0; s < n; ++s)
        if (blockOf[static_cast<std::size_t>(s)] == -1)
            throw UserError("partition does not cover state index " + std::to_string(s));

    const auto& names = statesOf(m);
    int q = static_cast<int>(partition.size());
    std::vector<std::string> blockNames;
    for (const auto& block : partition) {
        std::vector<std::string> parts;
        for (int s : block) parts.push_back(names[static_cast<std::size_t>(s)]);
        std::sort(parts.begin(), parts.end());
        std::string joined;
        for (const auto& p : parts) {
            if (!joined.empty()) joined += '+';
            joined += p;
        }
        blockNames.push_back(joined);
    }

    StateMap projection;
    projection.map.assign(blockOf.begin(), blockOf.end());

    auto fail = [&](std::size_t b, std::string reason) {
        QuotientOutcome out;
        out.ok = false;
        out.violatingBlock = blockNames[b];
        out.reason = std::move(reason);
        return out;
    };

    auto quotientProps = [&](const std::map<std::string, Predicate>& props,
                             std::map<std::string, Predicate>& qprops,
                             QuotientOutcome& bad) -> bool {
        for (const auto& [name, val] : props) {
            Predicate qv = Predicate::emptySet(q);
            for (std::size_t b = 0; b < partition.size(); ++b) {
                bool member = val.test(partition[b].front());
                for (int s : partition[b])
                    if (val.test(s) != member) {
                        bad = fail(b, "proposition '" + name + "' is not constant on the block");
                        return false;
                    }
                if (member) qv.set(static_cast<int>(b));
            }
            qprops.emplace(name, qv);
        }
        return true;
    };

    if (const auto* k = std::get_if<KripkeModel>(&m)) {
        KripkeModel qm;
        qm.states = blockNames;
        QuotientOutcome bad;
        if (!quotientProps(k->props, qm.props, bad)) return bad;
        qm.succ.assign(static_cast<std::size_t>(q), Predicate::emptySet(q));
        for (std::size_t b = 0; b < partition.size(); ++b) {
            Predicate image = imageOf(k->succ[static_cast<std::size_t>(partition[b].front())],
                                      projection, q);
            for (int s : partition[b])
                if (imageOf(k->succ[static_cast<std::size_t>(s)], projection, q) != image)
                    return fail(b, "successor block image is not constant on the block");
            qm.succ[b] = image;
        }
        QuotientOutcome out;
        out.ok = true;
        out.quotient = qm;
        out.projection = projection;
        return out;
    }

    if (const auto* l = std::get_if<LabeledModel>(&m)) {
        LabeledModel qm;
        qm.states = blockNames;
        qm.labels = l->labels;
        QuotientOutcome bad;
        if (!quotientProps(l->props, qm.props, bad)) return bad;
        qm.succ.assign(l->labels.size(),
                       std::vector<Predicate>(static_cast<std::size_t>(q), Predicate::emptySet(q)));
        for (std::size_t li = 0; li < l->labels.size(); ++li)
            for (std::size_t b = 0; b < partition.size(); ++b) {
                Predicate image = imageOf(l->succ[li][static_cast<std::size_t>(partition[b].front())],
                                          projection, q);
                for (int s : partition[b])
                    if (imageOf(l->succ[li][static_cast<std::size_t>(s)], projection, q) != image)
                        return fail(b, "successor block image differs on label '" + l->labels[li] + "'");
                qm.succ[li][b] = image;
            }
        QuotientOutcome out;
        out.ok = true;
        out.quotient = qm;
        out.projection = projection;
        return out;
    }

    const auto& p = std::get<ProbModel>(m);
    ProbModel qm;
    qm.states = blockNames;
    qm.payoutLabels = p.payoutLabels;
    for (const auto& label : p.payoutLabels) {
        std::vector<double> qv(static_cast<std::size_t>(q), 0.0);
        const auto& vals = p.payout.at(label);
        for (std::size_t b = 0; b < partition.size(); ++b) {
            double v = vals[static_cast<std::size_t>(partition[b].front())];
            for (int s : partition[b])
                if (std::fabs(vals[static_cast<std::size_t>(s)] - v) > kProbTolerance)
                    return fail(b, "payout '" + label + "' is not constant on the block");
            qv[b] = v;
        }
        qm.payout.emplace(label, qv);
    }
    qm.step.assign(static_cast<std::size_t>(q), {});
    for (std::size_t b = 0; b < partition.size(); ++b) {
        auto pushOf = [&](int s) {
            std::vector<double> push(static_cast<std::size_t>(q), 0.0);
            for (const auto& [y, w] : p.step[static_cast<std::size_t>(s)])
                push[static_cast<std::size_t>(blockOf[static_cast<std::size_t>(y)])] += w;
            return push;
        };
        std::vector<double> push = pushOf(partition[b].front());
        for (int s : partition[b]) {
            std::vector<double> other = pushOf(s);
            for (int c = 0; c < q; ++c)
                if (std::fabs(push[static_cast<std::size_t>(c)] - other[static_cast<std::size_t>(c)]) >
                    kProbTolerance)
                    return fail(b, "pushforward distribution is not constant on the block");
        }
        for (int c = 0; c < q; ++c)
            if (push[static_cast<std::size_t>(c)] > 0.0)
                qm.step[b].emplace_back(c, push[static_cast<std::size_t>(c)]);
    }
    QuotientOutcome out;
    out.ok = true;
    out.quotient = qm;
    out.projection = projection;
    return out;
}

} // namespace cofix
