//! Heavenly stems, earthly branches, the Five Elements and sexagenary pillars.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Wood,
    Fire,
    Earth,
    Metal,
    Water,
}

impl Element {
    pub const ALL: [Element; 5] = [
        Element::Wood,
        Element::Fire,
        Element::Earth,
        Element::Metal,
        Element::Water,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Element {
        Self::ALL[i % 5]
    }

    /// The element this one produces in the 生 cycle (Wood → Fire → Earth → Metal → Water).
    pub fn generates(self) -> Element {
        Self::from_index(self.index() + 1)
    }

    /// The element this one overcomes in the 克 cycle (Wood → Earth → Water → Fire → Metal).
    pub fn controls(self) -> Element {
        Self::from_index(self.index() + 2)
    }

    pub fn controlled_by(self) -> Element {
        Self::from_index(self.index() + 3)
    }

    pub fn generated_by(self) -> Element {
        Self::from_index(self.index() + 4)
    }

    pub fn glyph(self) -> char {
        ['木', '火', '土', '金', '水'][self.index()]
    }

    pub fn name(self) -> &'static str {
        ["Wood", "Fire", "Earth", "Metal", "Water"][self.index()]
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Yang,
    Yin,
}

impl Polarity {
    fn of_index(i: u8) -> Polarity {
        if i.is_multiple_of(2) {
            Polarity::Yang
        } else {
            Polarity::Yin
        }
    }
}

/// A value per element, indexed by [`Element`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerElement<T> {
    pub wood: T,
    pub fire: T,
    pub earth: T,
    pub metal: T,
    pub water: T,
}

impl<T> Index<Element> for PerElement<T> {
    type Output = T;
    fn index(&self, e: Element) -> &T {
        match e {
            Element::Wood => &self.wood,
            Element::Fire => &self.fire,
            Element::Earth => &self.earth,
            Element::Metal => &self.metal,
            Element::Water => &self.water,
        }
    }
}

impl<T> IndexMut<Element> for PerElement<T> {
    fn index_mut(&mut self, e: Element) -> &mut T {
        match e {
            Element::Wood => &mut self.wood,
            Element::Fire => &mut self.fire,
            Element::Earth => &mut self.earth,
            Element::Metal => &mut self.metal,
            Element::Water => &mut self.water,
        }
    }
}

impl<T: Copy> PerElement<T> {
    pub fn iter(&self) -> impl Iterator<Item = (Element, T)> + '_ {
        Element::ALL.into_iter().map(move |e| (e, self[e]))
    }
}

const STEM_GLYPHS: [char; 10] = ['甲', '乙', '丙', '丁', '戊', '己', '庚', '辛', '壬', '癸'];
const STEM_PINYIN: [&str; 10] = [
    "Jia", "Yi", "Bing", "Ding", "Wu", "Ji", "Geng", "Xin", "Ren", "Gui",
];
const BRANCH_GLYPHS: [char; 12] = [
    '子', '丑', '寅', '卯', '辰', '巳', '午', '未', '申', '酉', '戌', '亥',
];
const BRANCH_PINYIN: [&str; 12] = [
    "Zi", "Chou", "Yin", "Mao", "Chen", "Si", "Wu", "Wei", "Shen", "You", "Xu", "Hai",
];
const BRANCH_ELEMENTS: [Element; 12] = [
    Element::Water,
    Element::Earth,
    Element::Wood,
    Element::Wood,
    Element::Earth,
    Element::Fire,
    Element::Fire,
    Element::Earth,
    Element::Metal,
    Element::Metal,
    Element::Earth,
    Element::Water,
];

/// Hidden stems (藏干) per branch as (stem index, weight); principal first.
///
/// Three-tier table of the 子平 tradition (本气 / 中气 / 余气) with the
/// customary 0.6 / 0.3 / 0.1 split, 0.7 / 0.3 for two-stem branches and 1.0
/// for the pure branches 子 卯 酉.
const HIDDEN_STEMS: [&[(u8, f64)]; 12] = [
    &[(9, 1.0)],                     // 子: 癸
    &[(5, 0.6), (9, 0.3), (7, 0.1)], // 丑: 己 癸 辛
    &[(0, 0.6), (2, 0.3), (4, 0.1)], // 寅: 甲 丙 戊
    &[(1, 1.0)],                     // 卯: 乙
    &[(4, 0.6), (1, 0.3), (9, 0.1)], // 辰: 戊 乙 癸
    &[(2, 0.6), (6, 0.3), (4, 0.1)], // 巳: 丙 庚 戊
    &[(3, 0.7), (5, 0.3)],           // 午: 丁 己
    &[(5, 0.6), (3, 0.3), (1, 0.1)], // 未: 己 丁 乙
    &[(6, 0.6), (8, 0.3), (4, 0.1)], // 申: 庚 壬 戊
    &[(7, 1.0)],                     // 酉: 辛
    &[(4, 0.6), (7, 0.3), (3, 0.1)], // 戌: 戊 辛 丁
    &[(8, 0.7), (0, 0.3)],           // 亥: 壬 甲
];

/// One of the ten heavenly stems, 0 = 甲 … 9 = 癸.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Stem(u8);

impl Stem {
    pub fn new(index: u8) -> Option<Stem> {
        (index < 10).then_some(Stem(index))
    }

    /// Stem at `index` taken modulo 10.
    pub fn wrapping(index: i64) -> Stem {
        Stem(index.rem_euclid(10) as u8)
    }

    pub fn all() -> impl Iterator<Item = Stem> {
        (0..10).map(Stem)
    }

    pub fn from_glyph(c: char) -> Option<Stem> {
        STEM_GLYPHS
            .iter()
            .position(|&g| g == c)
            .map(|i| Stem(i as u8))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn element(self) -> Element {
        Element::from_index(self.0 as usize / 2)
    }

    pub fn polarity(self) -> Polarity {
        Polarity::of_index(self.0)
    }

    pub fn glyph(self) -> char {
        STEM_GLYPHS[self.0 as usize]
    }

    pub fn pinyin(self) -> &'static str {
        STEM_PINYIN[self.0 as usize]
    }
}

impl TryFrom<u8> for Stem {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Stem::new(v).ok_or_else(|| format!("stem index {v} out of range 0..10"))
    }
}

impl From<Stem> for u8 {
    fn from(s: Stem) -> u8 {
        s.0
    }
}

impl fmt::Display for Stem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

/// One of the twelve earthly branches, 0 = 子 … 11 = 亥.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Branch(u8);

impl Branch {
    pub fn new(index: u8) -> Option<Branch> {
        (index < 12).then_some(Branch(index))
    }

    pub fn wrapping(index: i64) -> Branch {
        Branch(index.rem_euclid(12) as u8)
    }

    pub fn all() -> impl Iterator<Item = Branch> {
        (0..12).map(Branch)
    }

    pub fn from_glyph(c: char) -> Option<Branch> {
        BRANCH_GLYPHS
            .iter()
            .position(|&g| g == c)
            .map(|i| Branch(i as u8))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn element(self) -> Element {
        BRANCH_ELEMENTS[self.0 as usize]
    }

    pub fn polarity(self) -> Polarity {
        Polarity::of_index(self.0)
    }

    pub fn glyph(self) -> char {
        BRANCH_GLYPHS[self.0 as usize]
    }

    pub fn pinyin(self) -> &'static str {
        BRANCH_PINYIN[self.0 as usize]
    }

    pub fn hidden_stems(self) -> impl Iterator<Item = (Stem, f64)> {
        HIDDEN_STEMS[self.0 as usize]
            .iter()
            .map(|&(s, w)| (Stem(s), w))
    }

    pub fn principal_stem(self) -> Stem {
        Stem(HIDDEN_STEMS[self.0 as usize][0].0)
    }
}

impl TryFrom<u8> for Branch {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Branch::new(v).ok_or_else(|| format!("branch index {v} out of range 0..12"))
    }
}

impl From<Branch> for u8 {
    fn from(b: Branch) -> u8 {
        b.0
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

/// A sexagenary stem-branch pair. Only parity-matched pairs exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PillarRepr", into = "PillarRepr")]
pub struct Pillar {
    stem: Stem,
    branch: Branch,
}

#[derive(Serialize, Deserialize)]
struct PillarRepr {
    stem: Stem,
    branch: Branch,
}

impl TryFrom<PillarRepr> for Pillar {
    type Error = String;
    fn try_from(r: PillarRepr) -> Result<Self, Self::Error> {
        Pillar::new(r.stem, r.branch)
            .ok_or_else(|| format!("{}{} is not a sexagenary pair", r.stem, r.branch))
    }
}

impl From<Pillar> for PillarRepr {
    fn from(p: Pillar) -> Self {
        PillarRepr {
            stem: p.stem,
            branch: p.branch,
        }
    }
}

impl Pillar {
    pub fn new(stem: Stem, branch: Branch) -> Option<Pillar> {
        (stem.polarity() == branch.polarity()).then_some(Pillar { stem, branch })
    }

    /// Pillar number `n` of the cycle, 0 = 甲子, taken modulo 60.
    pub fn from_sexagenary(n: i64) -> Pillar {
        let n = n.rem_euclid(60);
        Pillar {
            stem: Stem::wrapping(n),
            branch: Branch::wrapping(n),
        }
    }

    pub fn parse(text: &str) -> Option<Pillar> {
        let mut chars = text.chars();
        let stem = Stem::from_glyph(chars.next()?)?;
        let branch = Branch::from_glyph(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        Pillar::new(stem, branch)
    }

    pub fn stem(&self) -> Stem {
        self.stem
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// The unique n in 0..60 with n ≡ stem (mod 10) and n ≡ branch (mod 12).
    pub fn sexagenary_index(&self) -> u8 {
        let (s, b) = (self.stem.0 as i32, self.branch.0 as i32);
        // n = s + 10k with (s + 10k) ≡ b (mod 12); 10k ≡ b − s (mod 12) ⇒ 5k ≡ (b − s)/2 (mod 6)
        // and 5 is its own inverse mod 6.
        let k = (((b - s) / 2) * 5).rem_euclid(6);
        (s + 10 * k) as u8
    }

    pub fn offset(&self, steps: i64) -> Pillar {
        Pillar::from_sexagenary(self.sexagenary_index() as i64 + steps)
    }

    pub fn glyphs(&self) -> String {
        format!("{}{}", self.stem.glyph(), self.branch.glyph())
    }
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.stem, self.branch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stem_attributes() {
        let jia = Stem::new(0).unwrap();
        assert_eq!(
            (jia.glyph(), jia.element(), jia.polarity()),
            ('甲', Element::Wood, Polarity::Yang)
        );
        let gui = Stem::new(9).unwrap();
        assert_eq!(
            (gui.glyph(), gui.element(), gui.polarity()),
            ('癸', Element::Water, Polarity::Yin)
        );
        assert!(Stem::new(10).is_none());
    }

    #[test]
    fn hidden_stems_normalized() {
        for b in Branch::all() {
            let total: f64 = b.hidden_stems().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-9, "{b}");
            assert!(b.hidden_stems().all(|(_, w)| w > 0.0 && w <= 1.0));
            // the principal hidden stem carries the branch's own element
            assert_eq!(b.principal_stem().element(), b.element(), "{b}");
        }
    }

    #[test]
    fn sixty_valid_pairs() {
        let valid = Stem::all()
            .flat_map(|s| Branch::all().map(move |b| (s, b)))
            .filter(|&(s, b)| Pillar::new(s, b).is_some())
            .count();
        assert_eq!(valid, 60);
        for n in 0..60 {
            let p = Pillar::from_sexagenary(n);
            assert_eq!(p.sexagenary_index() as i64, n);
            assert_eq!(p.offset(1), Pillar::from_sexagenary(n + 1));
        }
        assert_eq!(Pillar::parse("甲子").unwrap().sexagenary_index(), 0);
        assert_eq!(Pillar::parse("癸亥").unwrap().sexagenary_index(), 59);
        assert!(Pillar::parse("甲丑").is_none());
    }

    #[test]
    fn cycles_of_elements() {
        assert_eq!(Element::Wood.generates(), Element::Fire);
        assert_eq!(Element::Wood.controls(), Element::Earth);
        assert_eq!(Element::Wood.controlled_by(), Element::Metal);
        assert_eq!(Element::Wood.generated_by(), Element::Water);
        for e in Element::ALL {
            assert_eq!(e.controls().controlled_by(), e);
            assert_eq!(e.generates().generated_by(), e);
        }
    }

    #[test]
    fn pillar_serde_rejects_mismatched_parity() {
        let ok: Pillar = serde_json::from_str(r#"{"stem":0,"branch":0}"#).unwrap();
        assert_eq!(ok.glyphs(), "甲子");
        assert!(serde_json::from_str::<Pillar>(r#"{"stem":0,"branch":1}"#).is_err());
    }
}
