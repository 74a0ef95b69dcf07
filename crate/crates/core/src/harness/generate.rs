//! Instances with known normal form: `post ∘ N ∘ pre` for random tame words.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formats::{word_from_json, word_to_json, MapDoc, NormalFormJson};
use crate::automorph::{apply_to_map, random_tame, AutoWord, PolyMap};
use crate::normalize::NormalForm;
use crate::poly::Rat;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormType {
    I,
    II,
    III,
}

impl std::str::FromStr for FormType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(FormType::I),
            "ii" => Ok(FormType::II),
            "iii" => Ok(FormType::III),
            _ => Err(Error::InvalidParams(format!("unknown type {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub map: PolyMap,
    pub ground_truth: NormalForm,
    pub pre: AutoWord,
    pub post: AutoWord,
    pub seed: u64,
}

impl Instance {
    pub fn to_doc(&self) -> MapDoc {
        MapDoc {
            normal_form: Some(NormalFormJson::from(&self.ground_truth)),
            pre: Some(word_to_json(&self.pre)),
            post: Some(word_to_json(&self.post)),
            seed: Some(self.seed),
            ..MapDoc::from_map(&self.map)
        }
    }

    /// Reads an instance document; `None` when generation data is absent.
    pub fn from_doc(doc: &MapDoc) -> Result<Option<Self>> {
        let (Some(nf), Some(pre), Some(post)) = (&doc.normal_form, &doc.pre, &doc.post) else {
            return Ok(None);
        };
        Ok(Some(Instance {
            map: doc.map()?,
            ground_truth: NormalForm::try_from(nf)?,
            pre: word_from_json(pre)?,
            post: word_from_json(post)?,
            seed: doc.seed.unwrap_or(0),
        }))
    }

    /// Whether `map = post ∘ N ∘ pre` holds exactly.
    pub fn identity_holds(&self) -> bool {
        apply_to_map(&self.pre, &self.ground_truth.map(), &self.post) == self.map
    }
}

/// Validated normal form from CLI-style parameters.
pub fn normal_form_from_params(
    ty: FormType,
    d: u32,
    m: Option<u32>,
    n: Option<u32>,
    a: &[Rat],
) -> Result<NormalForm> {
    let need =
        |v: Option<u32>, name: &str| v.ok_or_else(|| Error::InvalidParams(format!("type needs --{name}")));
    match ty {
        FormType::I => NormalForm::type_i(d),
        FormType::II => NormalForm::type_ii(d, need(m, "m")?),
        FormType::III => NormalForm::type_iii(d, need(m, "m")?, need(n, "n")?, a.to_vec()),
    }
}

/// Deterministic in all arguments.
pub fn generate_instance(
    nf: &NormalForm,
    seed: u64,
    word_len: usize,
    deg_bound: usize,
    coeff_bound: i64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pre = random_tame(rng.gen(), word_len, deg_bound, coeff_bound);
    let post = random_tame(rng.gen(), word_len, deg_bound, coeff_bound);
    Instance {
        map: apply_to_map(&pre, &nf.map(), &post),
        ground_truth: nf.clone(),
        pre,
        post,
        seed,
    }
}
