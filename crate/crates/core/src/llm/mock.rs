use sha2::{Digest, Sha256};

use super::{Backend, BackendError, ChatRequest, Reply};

const DEFAULT_CHOICES: usize = 4;

fn letter(i: usize) -> char {
    (b'A' + i as u8) as char
}

/// Index in `0..n` from the first 8 digest bytes; modulo bias < 2^-60 for n ≤ 8.
fn pick(digest: &[u8], n: usize) -> usize {
    let head: [u8; 8] = digest[..8].try_into().expect("sha256 has 32 bytes");
    (u64::from_le_bytes(head) % n as u64) as usize
}

pub(crate) struct MockGold;

impl Backend for MockGold {
    fn send(&self, request: &ChatRequest) -> Result<Reply, BackendError> {
        Ok(match request.meta.gold_index {
            Some(i) => Reply::text(letter(i).to_string()),
            None => Reply::text("No answer."),
        })
    }
}

pub(crate) struct MockUniform {
    pub seed: u64,
}

impl Backend for MockUniform {
    fn send(&self, request: &ChatRequest) -> Result<Reply, BackendError> {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(request.request_hash().as_bytes());
        let n = request.meta.n_choices.unwrap_or(DEFAULT_CHOICES);
        Ok(Reply::text(format!(
            "Answer: {}",
            letter(pick(&h.finalize(), n))
        )))
    }
}

pub(crate) struct MockFixed {
    pub letter: char,
}

impl Backend for MockFixed {
    fn send(&self, _: &ChatRequest) -> Result<Reply, BackendError> {
        Ok(Reply::text(self.letter.to_string()))
    }
}

pub(crate) struct MockChartEcho;

impl Backend for MockChartEcho {
    fn send(&self, request: &ChatRequest) -> Result<Reply, BackendError> {
        let key = request.meta.chart_key.as_deref().unwrap_or("");
        let n = request.meta.n_choices.unwrap_or(DEFAULT_CHOICES);
        let i = pick(&Sha256::digest(key.as_bytes()), n);
        Ok(Reply::text(format!("{key}\nAnswer: {}", letter(i))))
    }
}
