//! Porter suffix-stripping stemmer.
//!
//! This is the classic 1980 algorithm (with the widely-adopted `bli`/`logi`
//! revisions of the reference implementation), not the later Porter2/Snowball
//! variant. The two differ visibly: the classic algorithm maps `money` to
//! `monei` and `ponies` to `poni`, which is the behavior this crate's
//! downstream term statistics assume.
//!
//! The branch tables mirror the canonical suffix lists one to one; `ends`
//! mutates the stem marker on a match, so branches with equal bodies still
//! cannot be merged.
#![allow(clippy::collapsible_match, clippy::if_same_then_else)]

/// Stems a single lowercase ASCII token. Tokens of length <= 2 and non-ASCII
/// input are returned unchanged.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.is_ascii() {
        return word.to_string();
    }
    let mut s = Stemmer {
        b: word.as_bytes().to_vec(),
        k: word.len() - 1,
        j: 0,
    };
    s.step1ab();
    if s.k > 0 {
        s.step1c();
        s.step2();
        s.step3();
        s.step4();
        s.step5();
    }
    s.b.truncate(s.k + 1);
    // Tokens are lowercased upstream; from_utf8 cannot fail on ASCII input.
    String::from_utf8(s.b).expect("ascii buffer")
}

struct Stemmer {
    b: Vec<u8>,
    /// Index of the last live byte of the word.
    k: usize,
    /// End of the candidate stem set by the most recent `ends` match;
    /// -1 when the matched suffix was the whole word.
    j: isize,
}

impl Stemmer {
    /// A consonant is any letter other than a, e, i, o, u; `y` is a consonant
    /// when it starts the word or follows a vowel. Digits count as consonants.
    fn cons(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.cons(i - 1),
            _ => true,
        }
    }

    /// Number of vowel-consonant sequences in `b[0..=j]`.
    fn measure(&self) -> usize {
        if self.j < 0 {
            return 0;
        }
        let j = self.j as usize;
        let mut n = 0;
        let mut i = 0;
        loop {
            if i > j {
                return n;
            }
            if !self.cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i > j {
                    return n;
                }
                if self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i > j {
                    return n;
                }
                if !self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        self.j >= 0 && (0..=self.j as usize).any(|i| !self.cons(i))
    }

    /// True if `b[i-1..=i]` is a doubled consonant.
    fn doublec(&self, i: usize) -> bool {
        i >= 1 && self.b[i] == self.b[i - 1] && self.cons(i)
    }

    /// True if `b[i-2..=i]` is consonant-vowel-consonant and the final
    /// consonant is not w, x or y. Used to restore a trailing `e`.
    fn cvc(&self, i: usize) -> bool {
        if i < 2 || !self.cons(i) || self.cons(i - 1) || !self.cons(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    /// Tests for suffix `s`; on a match sets `j` to the stem end.
    fn ends(&mut self, s: &[u8]) -> bool {
        let l = s.len();
        if l > self.k + 1 {
            return false;
        }
        if &self.b[self.k + 1 - l..=self.k] != s {
            return false;
        }
        self.j = self.k as isize - l as isize;
        true
    }

    /// Replaces the suffix after `j` with `s`.
    fn set_to(&mut self, s: &[u8]) {
        self.b.truncate((self.j + 1) as usize);
        self.b.extend_from_slice(s);
        self.k = (self.j + s.len() as isize) as usize;
    }

    fn replace_if_measured(&mut self, s: &[u8]) {
        if self.measure() > 0 {
            self.set_to(s);
        }
    }

    /// Plurals and -ed/-ing: caresses -> caress, ponies -> poni,
    /// agreed -> agree, motoring -> motor, hopping -> hop.
    fn step1ab(&mut self) {
        if self.b[self.k] == b's' {
            if self.ends(b"sses") {
                self.k -= 2;
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.b[self.k - 1] != b's' {
                self.k -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            self.k = self.j as usize;
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.doublec(self.k) {
                self.k -= 1;
                if matches!(self.b[self.k], b'l' | b's' | b'z') {
                    self.k += 1;
                }
            } else {
                self.j = self.k as isize;
                if self.measure() == 1 && self.cvc(self.k) {
                    self.set_to(b"e");
                }
            }
        }
    }

    /// Terminal y -> i when the stem contains a vowel: happy -> happi.
    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            self.b[self.k] = b'i';
        }
    }

    /// Double suffixes to single ones: -ization -> -ize, -ational -> -ate.
    fn step2(&mut self) {
        if self.k < 1 {
            return;
        }
        match self.b[self.k - 1] {
            b'a' => {
                if self.ends(b"ational") {
                    self.replace_if_measured(b"ate");
                } else if self.ends(b"tional") {
                    self.replace_if_measured(b"tion");
                }
            }
            b'c' => {
                if self.ends(b"enci") {
                    self.replace_if_measured(b"ence");
                } else if self.ends(b"anci") {
                    self.replace_if_measured(b"ance");
                }
            }
            b'e' => {
                if self.ends(b"izer") {
                    self.replace_if_measured(b"ize");
                }
            }
            b'l' => {
                if self.ends(b"bli") {
                    self.replace_if_measured(b"ble");
                } else if self.ends(b"alli") {
                    self.replace_if_measured(b"al");
                } else if self.ends(b"entli") {
                    self.replace_if_measured(b"ent");
                } else if self.ends(b"eli") {
                    self.replace_if_measured(b"e");
                } else if self.ends(b"ousli") {
                    self.replace_if_measured(b"ous");
                }
            }
            b'o' => {
                if self.ends(b"ization") {
                    self.replace_if_measured(b"ize");
                } else if self.ends(b"ation") {
                    self.replace_if_measured(b"ate");
                } else if self.ends(b"ator") {
                    self.replace_if_measured(b"ate");
                }
            }
            b's' => {
                if self.ends(b"alism") {
                    self.replace_if_measured(b"al");
                } else if self.ends(b"iveness") {
                    self.replace_if_measured(b"ive");
                } else if self.ends(b"fulness") {
                    self.replace_if_measured(b"ful");
                } else if self.ends(b"ousness") {
                    self.replace_if_measured(b"ous");
                }
            }
            b't' => {
                if self.ends(b"aliti") {
                    self.replace_if_measured(b"al");
                } else if self.ends(b"iviti") {
                    self.replace_if_measured(b"ive");
                } else if self.ends(b"biliti") {
                    self.replace_if_measured(b"ble");
                }
            }
            b'g' => {
                if self.ends(b"logi") {
                    self.replace_if_measured(b"log");
                }
            }
            _ => {}
        }
    }

    /// -icate, -ative, -alize, -iciti, -ical, -ful, -ness.
    fn step3(&mut self) {
        match self.b[self.k] {
            b'e' => {
                if self.ends(b"icate") {
                    self.replace_if_measured(b"ic");
                } else if self.ends(b"ative") {
                    self.replace_if_measured(b"");
                } else if self.ends(b"alize") {
                    self.replace_if_measured(b"al");
                }
            }
            b'i' => {
                if self.ends(b"iciti") {
                    self.replace_if_measured(b"ic");
                }
            }
            b'l' => {
                if self.ends(b"ical") {
                    self.replace_if_measured(b"ic");
                } else if self.ends(b"ful") {
                    self.replace_if_measured(b"");
                }
            }
            b's' => {
                if self.ends(b"ness") {
                    self.replace_if_measured(b"");
                }
            }
            _ => {}
        }
    }

    /// Strips -ant, -ence, -ment, -ion and friends when the measure exceeds 1.
    fn step4(&mut self) {
        if self.k < 1 {
            return;
        }
        let matched = match self.b[self.k - 1] {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ant")
                    || self.ends(b"ement")
                    || self.ends(b"ment")
                    || self.ends(b"ent")
            }
            b'o' => {
                (self.ends(b"ion")
                    && self.j >= 0
                    && matches!(self.b[self.j as usize], b's' | b't'))
                    || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            self.k = self.j as usize;
        }
    }

    /// Drops a final -e and reduces -ll: probate -> probat, controll -> control.
    fn step5(&mut self) {
        self.j = self.k as isize;
        if self.b[self.k] == b'e' {
            let a = self.measure();
            if a > 1 || (a == 1 && !self.cvc(self.k - 1)) {
                self.k -= 1;
            }
        }
        if self.b[self.k] == b'l' && self.doublec(self.k) && self.measure() > 1 {
            self.k -= 1;
        }
    }
}
