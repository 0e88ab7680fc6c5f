#include "plateful/engine.hpp"

#include "plateful/error.hpp"

namespace plateful {

std::vector<std::string> category_tokens(const Review& review)
{
    std::vector<std::string> out;
    for (const auto& c : review.categories) {
        auto toks = tokenize(c);
        out.insert(out.end(), toks.begin(), toks.end());
    }
    return out;
}

std::shared_ptr<const EngineState> EngineState::build(EngineInputs inputs)
{
    auto state = std::make_shared<EngineState>();
    state->m_inputs = std::move(inputs);
    const auto& reviews = state->m_inputs.reviews;

    for (std::size_t i = 0; i < state->m_inputs.services.size(); ++i) {
        state->m_service_pos.emplace(state->m_inputs.services[i].id, i);
    }
    std::vector<IndexedDoc> text_docs;
    std::vector<IndexedDoc> category_docs;
    text_docs.reserve(reviews.size());
    category_docs.reserve(reviews.size());
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        const auto& r = reviews[i];
        if (!state->m_review_pos.emplace(r.id, i).second) {
            throw DataError("duplicate review id '" + r.id + "'");
        }
        text_docs.push_back({r.id, tokenize(r.text)});
        category_docs.push_back({r.id, category_tokens(r)});
    }
    state->m_text_index = build_index(text_docs, "text");
    state->m_category_index = build_index(category_docs, "categories");

    const auto& table = state->m_inputs.embeddings;
    const auto& overrides = state->m_inputs.doc_vector_overrides;
    if (table) {
        state->m_dim = table->dim();
    } else if (!overrides.empty()) {
        state->m_dim = overrides.begin()->second.size();
    }
    for (const auto& [id, v] : overrides) {
        if (v.size() != state->m_dim) {
            throw DataError("document vector for '" + id + "' has dimension " + std::to_string(v.size()) +
                            ", expected " + std::to_string(state->m_dim));
        }
    }
    for (const auto& doc : text_docs) {
        if (auto it = overrides.find(doc.doc_id); it != overrides.end()) {
            state->m_doc_vectors.emplace(doc.doc_id, it->second);
        } else if (table) {
            state->m_doc_vectors.emplace(doc.doc_id, embed_sentence(*table, doc.tokens));
        } else {
            state->m_doc_vectors.emplace(doc.doc_id, Vector(state->m_dim, 0.0));
        }
    }

    const auto* classifier = state->m_inputs.sentiment.get();
    state->m_insights.reserve(reviews.size());
    for (const auto& r : reviews) {
        ReviewInsight insight;
        insight.sentiment_class = classifier != nullptr ? classifier->predict(r.text).star_class : r.label;
        insight.polarity = polarity(insight.sentiment_class);
        insight.pairs = extract_pairs_from_text(r.text);
        Polarity base = insight.polarity;
        insight.tags = aggregate_tags(insight.pairs, [base](const TagPair&) { return base; });
        state->m_insights.push_back(std::move(insight));
    }
    return state;
}

std::shared_ptr<const EngineState> EngineState::with_review(Review review) const
{
    EngineInputs next = m_inputs;
    next.reviews.push_back(std::move(review));
    return build(std::move(next));
}

const Review* EngineState::find_review(const std::string& id) const
{
    auto it = m_review_pos.find(id);
    return it == m_review_pos.end() ? nullptr : &m_inputs.reviews[it->second];
}

const FoodService* EngineState::find_service(const std::string& id) const
{
    auto it = m_service_pos.find(id);
    return it == m_service_pos.end() ? nullptr : &m_inputs.services[it->second];
}

const ReviewInsight& EngineState::insight(const std::string& review_id) const
{
    auto it = m_review_pos.find(review_id);
    if (it == m_review_pos.end()) {
        throw ArgumentError("unknown review '" + review_id + "'");
    }
    return m_insights[it->second];
}

Vector EngineState::embed_query(const std::vector<std::string>& tokens) const
{
    if (m_inputs.embeddings) {
        return embed_sentence(*m_inputs.embeddings, tokens);
    }
    return Vector(m_dim, 0.0);
}

}  // namespace plateful
