//! Striped cluster: `n` servers each hold one symbol of every stripe, and
//! a failed server is rebuilt stripe by stripe with a repair scheme.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::repair::RepairScheme;
use crate::rs::PolyF;

#[derive(Clone, Debug)]
pub struct ClusterConfig {
    pub scheme: RepairScheme,
    pub m_stripes: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Cluster {
    scheme: RepairScheme,
    messages: Vec<PolyF>,
    // servers[node][stripe]
    servers: Vec<Vec<FieldElem>>,
}

/// Bit accounting for one server failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    pub failed: String,
    pub failed_index: usize,
    pub m_stripes: usize,
    /// `b(a*)` for a single stripe.
    pub subsymbols_per_stripe: usize,
    pub downstream_bits: u64,
    /// The erased point, one symbol of F, sent to each of the `n` servers.
    pub upstream_bits: u64,
    pub naive_downstream_bits: u64,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub reports: Vec<RepairReport>,
    pub max_downstream_bits: u64,
    pub mean_downstream_bits: f64,
    pub all_verified: bool,
    /// Cluster state after the campaign equals the state before it.
    pub conserved: bool,
}

/// Fills the cluster with `m_stripes` random codewords from `seed`.
pub fn provision(cfg: &ClusterConfig) -> Result<Cluster> {
    if cfg.m_stripes == 0 {
        return Err(Error::InvalidScheme("m_stripes must be at least 1".into()));
    }
    let code = cfg.scheme.code();
    let size = code.field().size() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let messages: Vec<PolyF> = (0..cfg.m_stripes)
        .map(|_| {
            PolyF::from_coeffs(
                (0..code.k())
                    .map(|_| FieldElem(rng.gen_range(0..size) as u16))
                    .collect(),
            )
        })
        .collect();
    let words = messages
        .par_iter()
        .map(|msg| code.encode(msg))
        .collect::<Result<Vec<_>>>()?;
    let servers = (0..code.n())
        .map(|node| words.iter().map(|w| w[node]).collect())
        .collect();
    Ok(Cluster {
        scheme: cfg.scheme.clone(),
        messages,
        servers,
    })
}

impl Cluster {
    pub fn scheme(&self) -> &RepairScheme {
        &self.scheme
    }

    pub fn m_stripes(&self) -> usize {
        self.messages.len()
    }

    pub fn messages(&self) -> &[PolyF] {
        &self.messages
    }

    /// Contents of server `node`, one symbol per stripe.
    pub fn server(&self, node: usize) -> &[FieldElem] {
        &self.servers[node]
    }

    pub fn servers(&self) -> &[Vec<FieldElem>] {
        &self.servers
    }

    /// Stripe `s` as a codeword.
    pub fn stripe(&self, s: usize) -> Vec<FieldElem> {
        self.servers.iter().map(|col| col[s]).collect()
    }

    /// Wipes server `node`, rebuilds it from the survivors and reports the
    /// traffic.
    pub fn fail_and_repair(&mut self, node: usize) -> Result<RepairReport> {
        let code = self.scheme.code();
        if node >= code.n() {
            return Err(Error::PointNotInCode {
                point: format!("#{node}"),
            });
        }
        let lost = std::mem::replace(
            &mut self.servers[node],
            vec![FieldElem::ZERO; self.messages.len()],
        );
        let transcripts = (0..self.messages.len())
            .into_par_iter()
            .map(|s| self.scheme.repair(&self.stripe(s), node))
            .collect::<Result<Vec<_>>>()?;
        let rebuilt: Vec<FieldElem> = transcripts.iter().map(|t| t.reconstructed).collect();
        let verified = rebuilt == lost;
        self.servers[node] = rebuilt;

        let tower = self.scheme.tower();
        let (d, t) = (tower.d() as u64, tower.t() as u64);
        let stripes = self.messages.len() as u64;
        let downstream: u64 = transcripts
            .iter()
            .map(|tr| tr.downloaded_subsymbols as u64 * d)
            .sum();
        Ok(RepairReport {
            failed: code.point(node).to_string(),
            failed_index: node,
            m_stripes: self.messages.len(),
            subsymbols_per_stripe: transcripts[0].downloaded_subsymbols,
            downstream_bits: downstream,
            upstream_bits: code.n() as u64 * t * d,
            naive_downstream_bits: stripes * code.k() as u64 * t * d,
            verified,
        })
    }

    /// Fails and repairs each listed server in turn.
    pub fn campaign(&mut self, failures: &[usize]) -> Result<CampaignReport> {
        let before = self.servers.clone();
        let reports = failures
            .iter()
            .map(|&node| self.fail_and_repair(node))
            .collect::<Result<Vec<_>>>()?;
        let max = reports.iter().map(|r| r.downstream_bits).max().unwrap_or(0);
        let mean = if reports.is_empty() {
            0.0
        } else {
            reports.iter().map(|r| r.downstream_bits as f64).sum::<f64>() / reports.len() as f64
        };
        Ok(CampaignReport {
            all_verified: reports.iter().all(|r| r.verified),
            conserved: self.servers == before,
            max_downstream_bits: max,
            mean_downstream_bits: mean,
            reports,
        })
    }
}
