//! Frequent-pattern mining over paragraph transactions.
//!
//! Every paragraph with at least one recognized concept becomes a
//! transaction: the set of distinct concept ids it mentions. Transactions
//! feed an FP-tree (a frequency-ordered prefix tree with per-concept
//! node-link chains) and a rule-confidence matrix.

mod association;
mod fptree;
mod growth;
mod transactions;

pub use association::AssociationMatrix;
pub use fptree::{build_fp_tree, FpNode, FpTree, HeaderEntry, NodeId};
pub use growth::{frequent_patterns, FrequentPattern};
pub use transactions::{build_transactions, Transaction, TransactionDb, TransactionError};
