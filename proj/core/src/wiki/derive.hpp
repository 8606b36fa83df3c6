#pragma once

// Values the wiki recomputes from stored entries; never persisted.

#include "cnlwiki/wiki/wiki.hpp"

namespace cnlwiki::wiki::detail {

SemanticStatus computeStatus(const grammar::CompiledGrammar& g, const Entry& e);

/// Parse count of the canonical rendering of the entry's first tree, per
/// language that can render it.
std::map<std::string, int> probeAmbiguity(const grammar::CompiledGrammar& g, const Entry& e);

/// Statuses and parse counts for every entry.
void recomputeEntries(Snapshot& s);

/// Adds an entity article for each lexical function that lacks one; returns
/// the names created.
std::vector<std::string> ensureEntityArticles(Snapshot& s);

void rebuildKb(Snapshot& s);

std::string entityOf(const std::string& lexicalFunction);

/// Numeric part of an entry id ("e12" -> 12), 0 when malformed.
long entryNumber(const std::string& id);

}  // namespace cnlwiki::wiki::detail
