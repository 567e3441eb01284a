#include "scamtrace/textfeat.hpp"

namespace scamtrace::textfeat {

namespace {

// Keep in sync with data/stopwords_en.txt (a unit test compares them).
// Contractions appear apostrophe-stripped to match the tokenizer.
const char* kDefaultStopWords[] = {
    "a", "about", "above", "after", "again", "against", "aint", "all", "also",
    "am", "an", "and", "any", "are", "arent", "as", "at", "be", "because",
    "been", "before", "being", "below", "between", "both", "but", "by", "can",
    "cannot", "cant", "could", "couldnt", "did", "didnt", "do", "does",
    "doesnt", "doing", "dont", "down", "during", "each", "few", "for", "from",
    "further", "had", "hadnt", "has", "hasnt", "have", "havent", "having",
    "he", "hed", "her", "here", "heres", "hers", "herself", "hes", "him",
    "himself", "his", "how", "hows", "i", "id", "if", "im", "in", "into",
    "is", "isnt", "it", "its", "itself", "ive", "just", "lets", "may", "me",
    "might", "more", "most", "must", "mustnt", "my", "myself", "no", "nor",
    "not", "now", "of", "off", "on", "once", "only", "or", "other", "ought",
    "our", "ours", "ourselves", "out", "over", "own", "same", "shall",
    "shant", "she", "shed", "shes", "should", "shouldnt", "so", "some",
    "such", "than", "that", "thats", "the", "their", "theirs", "them",
    "themselves", "then", "there", "theres", "these", "they", "theyd",
    "theyll", "theyre", "theyve", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "wasnt", "we", "wed", "were",
    "werent", "weve", "what", "whats", "when", "whens", "where", "wheres",
    "which", "while", "who", "whom", "whos", "why", "whys", "will", "with",
    "wont", "would", "wouldnt", "you", "youd", "youll", "your", "youre",
    "yours", "yourself", "yourselves", "youve",
};

}  // namespace

const std::set<std::string>& default_stop_words() {
    static const std::set<std::string> words(std::begin(kDefaultStopWords),
                                             std::end(kDefaultStopWords));
    return words;
}

}  // namespace scamtrace::textfeat
