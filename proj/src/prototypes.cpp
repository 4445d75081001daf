#include "lcp/prototypes.hpp"

#include <sstream>

#include <json.hpp>

#include "lcp/kmeans.hpp"
#include "lcp/util.hpp"

namespace lcp {

const char* to_string(PrototypeKind kind) { return kind == PrototypeKind::precedent ? "precedent" : "provision"; }

DiscoveryResult discover_prototypes(const std::vector<Embedding>& train_embeddings,
                                    const std::vector<std::string>& sample_ids,
                                    const std::vector<LabelVector>& labels, std::size_t label_count, std::size_t k,
                                    double s_min, std::uint64_t seed, unsigned jobs) {
    if (train_embeddings.size() != labels.size() || sample_ids.size() != labels.size()) {
        throw DataError("discover_prototypes: embeddings, ids and labels differ in length");
    }
    std::vector<std::vector<Prototype>> per_label(label_count);
    parallel_for(label_count, jobs, [&](std::size_t l) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i].at(l)) members.push_back(i);
        }
        if (members.empty()) return;
        std::vector<Eigen::VectorXd> points;
        points.reserve(members.size());
        for (auto i : members) points.push_back(train_embeddings[i].vector);
        const auto clusters = cluster_cosine_kmeans(points, k, derive_seed(seed, "label:" + std::to_string(l)));

        for (std::size_t j = 0; j < clusters.centroids.size(); ++j) {
            const auto& c = clusters.centroids[j];
            std::size_t best = 0;
            double best_cos = -2.0;
            for (std::size_t m = 0; m < points.size(); ++m) {
                const double s = cosine(points[m], c);
                if (s > best_cos) {
                    best_cos = s;
                    best = m;
                }
            }
            Prototype p;
            p.label_index = l;
            p.kind = PrototypeKind::precedent;
            p.slot = j;
            if (best_cos > s_min) {
                p.vector = train_embeddings[members[best]];
                p.source = sample_ids[members[best]];
            } else {
                p.vector = Embedding{c, c.norm() > 0.0};
                p.source = kCentroidSource;
            }
            per_label[l].push_back(std::move(p));
        }
    });

    DiscoveryResult result;
    for (std::size_t l = 0; l < label_count; ++l) {
        if (per_label[l].empty()) result.labels_without_positives.push_back(l);
        for (auto& p : per_label[l]) result.prototypes.push_back(std::move(p));
    }
    return result;
}

std::vector<Prototype> encode_provision_prototypes(const LabelSet& labels, const EncoderParams& encoder) {
    const auto missing = labels.missing_provisions();
    if (!missing.empty()) {
        std::string list;
        for (auto i : missing) list += (list.empty() ? "" : ", ") + labels.at(i).key();
        throw DataError("missing provision text for labels: " + list);
    }
    std::vector<Prototype> out;
    out.reserve(labels.size());
    for (std::size_t l = 0; l < labels.size(); ++l) {
        out.push_back({l, PrototypeKind::provision, 0, encode_text(labels.provision_text(l), encoder),
                       labels.at(l).key()});
    }
    return out;
}

std::string provision_record_id(const CitationRef& ref) { return "provision:" + ref.key(); }

std::vector<Prototype> provision_prototypes_from_table(const LabelSet& labels, const EmbeddingTable& table) {
    std::vector<Prototype> out;
    std::string missing;
    for (std::size_t l = 0; l < labels.size(); ++l) {
        const auto it = table.find(provision_record_id(labels.at(l)));
        if (it == table.end()) {
            missing += (missing.empty() ? "" : ", ") + labels.at(l).key();
            continue;
        }
        out.push_back({l, PrototypeKind::provision, 0, it->second, labels.at(l).key()});
    }
    if (!missing.empty()) throw DataError("embedding table lacks provision records for: " + missing);
    return out;
}

std::string format_prototype_dump(const std::vector<Prototype>& prototypes) {
    std::string out;
    for (const auto& p : prototypes) {
        nlohmann::json record = {{"label", p.label_index},
                                 {"kind", to_string(p.kind)},
                                 {"slot", p.slot},
                                 {"source", p.source},
                                 {"vector", std::vector<double>(p.vector.vector.data(),
                                                                p.vector.vector.data() + p.vector.vector.size())}};
        out += record.dump() + "\n";
    }
    return out;
}

std::vector<Prototype> parse_prototype_dump(const std::string& contents) {
    std::vector<Prototype> out;
    std::istringstream in(contents);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        try {
            const auto record = nlohmann::json::parse(line);
            Prototype p;
            p.label_index = record.at("label").get<std::size_t>();
            const auto kind = record.at("kind").get<std::string>();
            if (kind != "precedent" && kind != "provision") throw DataError("unknown prototype kind: " + kind);
            p.kind = kind == "precedent" ? PrototypeKind::precedent : PrototypeKind::provision;
            p.slot = record.value("slot", std::size_t{0});
            p.source = record.at("source").get<std::string>();
            const auto values = record.at("vector").get<std::vector<double>>();
            p.vector.vector = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
            p.vector.normalized = std::abs(p.vector.vector.norm() - 1.0) <= 1e-6;
            out.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("prototype dump: ") + e.what());
        }
    }
    return out;
}

}  // namespace lcp
