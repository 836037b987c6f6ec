//! Identifier newtypes: section paths, requirement ids, function numbers,
//! sign-off roles and requirement kinds.

use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;

/// Dotted path of lowercase tokens naming a template node, e.g.
/// `introduction.purpose`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectionPath(String);

pub(crate) fn is_path_token(token: &str) -> bool {
    let mut chars = token.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
}

impl SectionPath {
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        if !s.is_empty() && s.split('.').all(is_path_token) {
            Ok(Self(s.to_string()))
        } else {
            Err(ModelError::MalformedPath(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.split('.').count()
    }

    pub fn parent(&self) -> Option<SectionPath> {
        self.0
            .rsplit_once('.')
            .map(|(parent, _)| SectionPath(parent.to_string()))
    }

    pub fn last_token(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or(&self.0)
    }

    pub fn child(&self, token: &str) -> Result<SectionPath, ModelError> {
        SectionPath::parse(&format!("{}.{}", self.0, token))
    }
}

impl fmt::Display for SectionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SectionPath {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Requirement identifier matching `[A-Z]{1,4}-[1-9][0-9]*`.
///
/// Ordering is "natural": the alphabetic prefix lexicographically, then the
/// number numerically, so `FR-2` sorts before `FR-10`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReqId {
    prefix: String,
    number: u64,
}

impl ReqId {
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        let malformed = || ModelError::MalformedId(s.to_string());
        let (prefix, digits) = s.split_once('-').ok_or_else(malformed)?;
        if prefix.is_empty() || prefix.len() > 4 || !prefix.bytes().all(|b| b.is_ascii_uppercase()) {
            return Err(malformed());
        }
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let number = digits.parse().map_err(|_| malformed())?;
        Ok(Self {
            prefix: prefix.to_string(),
            number,
        })
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn number(&self) -> u64 {
        self.number
    }
}

impl fmt::Display for ReqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.prefix, self.number)
    }
}

impl FromStr for ReqId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Dotted-decimal product function number such as `1.2.3`.
///
/// The derived ordering on the component vector is componentwise numeric
/// with a prefix sorting before its extensions (`1 < 1.1 < 1.2 < 2`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionNumber(Vec<u32>);

impl FunctionNumber {
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        let malformed = || ModelError::MalformedFunctionNumber(s.to_string());
        let mut parts = Vec::new();
        for part in s.split('.') {
            if part.is_empty() || part.starts_with('0') || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            parts.push(part.parse::<u32>().map_err(|_| malformed())?);
        }
        Ok(Self(parts))
    }

    /// Builds a number from components; every component must be positive.
    pub fn from_components(parts: Vec<u32>) -> Result<Self, ModelError> {
        if parts.is_empty() || parts.contains(&0) {
            let text = parts.iter().map(u32::to_string).collect::<Vec<_>>().join(".");
            return Err(ModelError::MalformedFunctionNumber(text));
        }
        Ok(Self(parts))
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The number with its last component dropped; `None` for top-level numbers.
    pub fn parent(&self) -> Option<FunctionNumber> {
        (self.0.len() > 1).then(|| FunctionNumber(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("function numbers have at least one component")
    }
}

impl fmt::Display for FunctionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

impl FromStr for FunctionNumber {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

macro_rules! token_enum {
    ($(#[$meta:meta])* $name:ident, $err:ident { $($variant:ident => $token:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self {
                    $($name::$variant => $token),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }

        impl FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($token => Ok($name::$variant),)+
                    _ => Err(ModelError::$err(s.to_string())),
                }
            }
        }
    };
}

token_enum! {
    /// Category of a requirement; decides which requirements section it is listed under.
    ReqKind, UnknownKind {
        Functional => "functional",
        Behavioural => "behavioural",
        UserInterface => "user-interface",
        HardwareInterface => "hardware-interface",
        SoftwareInterface => "software-interface",
        CommunicationInterface => "communication-interface",
        Performance => "performance",
        Safety => "safety",
        Security => "security",
        Quality => "quality",
        Other => "other",
    }
}

token_enum! {
    /// The five approval roles of the sign-off block, declared in rendering order.
    SignoffRole, UnknownRole {
        SubmittedBy => "submitted-by",
        CoordApplicationsArchitecture => "coord-applications-architecture",
        CoordEngineering => "coord-engineering",
        CoordTestDirector => "coord-test-director",
        ApprovedBy => "approved-by",
    }
}

impl SignoffRole {
    /// Title printed for the role in the rendered sign-off block.
    pub fn display_name(self) -> &'static str {
        match self {
            SignoffRole::SubmittedBy => "Program Manager/Functional Project Officer",
            SignoffRole::CoordApplicationsArchitecture => "Director, Applications Architecture",
            SignoffRole::CoordEngineering => "Director, Engineering",
            SignoffRole::CoordTestDirector => "Test Director",
            SignoffRole::ApprovedBy => "Functional Manager",
        }
    }
}
