//! Closed vocabulary of the lane-change knowledge graph.
//!
//! Ten concepts, their category instances and the nine relations that point
//! at them. Every observation is reified into one of these triples before it
//! enters the graph:
//!
//! | Concept | Instances | Relation |
//! |---------|-----------|----------|
//! | intention | LLC, LK, RLC | `INTENTION_IS` |
//! | latVelocity | movingLeft, movingStraight, movingRight | `LATERAL_VELOCITY_IS` |
//! | latAcceleration | leftAcceleration, zeroAcceleration, rightAcceleration | `LATERAL_ACCELERATION_IS` |
//! | ttcPreceding | {high,medium,low}RiskPreceding | `PRECEDING_TTC_IS` |
//! | ttcLeftPreceding | {high,medium,low}RiskLeftPreceding | `LEFT_PRECEDING_TTC_IS` |
//! | ttcRightPreceding | {high,medium,low}RiskRightPreceding | `RIGHT_PRECEDING_TTC_IS` |
//! | ttcLeftFollowing | {high,medium,low}RiskLeftFollowing | `LEFT_FOLLOWING_TTC_IS` |
//! | ttcRightFollowing | {high,medium,low}RiskRightFollowing | `RIGHT_FOLLOWING_TTC_IS` |
//! | vehicleID | one id per vehicle and frame | `HAS_CHILD` |
//! | vehicle | the generic `vehicle` entity | any |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("unknown relation `{name}` in predicate")]
    UnknownRelation { name: String },
    #[error("{field} `{entity}` is not an instance of `{expected}` required by {relation}")]
    ObjectConceptMismatch {
        field: &'static str,
        relation: Relation,
        entity: String,
        expected: Concept,
    },
    #[error("unknown entity `{name}` in {field}")]
    UnknownEntity { field: &'static str, name: String },
    #[error("subject `{entity}` cannot carry relation {relation}")]
    InvalidSubject { relation: Relation, entity: String },
    #[error("concept `{0}` has no reifying relation")]
    NoRelationForConcept(Concept),
    #[error("hypothesis `{0}` is not an intention instance")]
    HypothesisNotIntention(String),
}

impl OntologyError {
    pub fn name(&self) -> &'static str {
        match self {
            OntologyError::UnknownRelation { .. } => "UnknownRelation",
            OntologyError::ObjectConceptMismatch { .. } => "ObjectConceptMismatch",
            OntologyError::UnknownEntity { .. } => "UnknownEntity",
            OntologyError::InvalidSubject { .. } => "InvalidSubject",
            OntologyError::NoRelationForConcept(_) => "NoRelationForConcept",
            OntologyError::HypothesisNotIntention(_) => "HypothesisNotIntention",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Concept {
    #[serde(rename = "intention")]
    Intention,
    #[serde(rename = "latVelocity")]
    LatVelocity,
    #[serde(rename = "latAcceleration")]
    LatAcceleration,
    #[serde(rename = "ttcPreceding")]
    TtcPreceding,
    #[serde(rename = "ttcLeftPreceding")]
    TtcLeftPreceding,
    #[serde(rename = "ttcRightPreceding")]
    TtcRightPreceding,
    #[serde(rename = "ttcLeftFollowing")]
    TtcLeftFollowing,
    #[serde(rename = "ttcRightFollowing")]
    TtcRightFollowing,
    #[serde(rename = "vehicleID")]
    VehicleId,
    #[serde(rename = "vehicle")]
    Vehicle,
}

impl Concept {
    pub const ALL: [Concept; 10] = [
        Concept::Intention,
        Concept::LatVelocity,
        Concept::LatAcceleration,
        Concept::TtcPreceding,
        Concept::TtcLeftPreceding,
        Concept::TtcRightPreceding,
        Concept::TtcLeftFollowing,
        Concept::TtcRightFollowing,
        Concept::VehicleId,
        Concept::Vehicle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Concept::Intention => "intention",
            Concept::LatVelocity => "latVelocity",
            Concept::LatAcceleration => "latAcceleration",
            Concept::TtcPreceding => "ttcPreceding",
            Concept::TtcLeftPreceding => "ttcLeftPreceding",
            Concept::TtcRightPreceding => "ttcRightPreceding",
            Concept::TtcLeftFollowing => "ttcLeftFollowing",
            Concept::TtcRightFollowing => "ttcRightFollowing",
            Concept::VehicleId => "vehicleID",
            Concept::Vehicle => "vehicle",
        }
    }

    /// The relation whose objects are instances of this concept.
    pub fn relation(self) -> Result<Relation, OntologyError> {
        Ok(match self {
            Concept::Intention => Relation::IntentionIs,
            Concept::LatVelocity => Relation::LateralVelocityIs,
            Concept::LatAcceleration => Relation::LateralAccelerationIs,
            Concept::TtcPreceding => Relation::PrecedingTtcIs,
            Concept::TtcLeftPreceding => Relation::LeftPrecedingTtcIs,
            Concept::TtcRightPreceding => Relation::RightPrecedingTtcIs,
            Concept::TtcLeftFollowing => Relation::LeftFollowingTtcIs,
            Concept::TtcRightFollowing => Relation::RightFollowingTtcIs,
            Concept::VehicleId => Relation::HasChild,
            Concept::Vehicle => return Err(OntologyError::NoRelationForConcept(self)),
        })
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    IntentionIs,
    LateralVelocityIs,
    LateralAccelerationIs,
    PrecedingTtcIs,
    LeftPrecedingTtcIs,
    RightPrecedingTtcIs,
    LeftFollowingTtcIs,
    RightFollowingTtcIs,
    HasChild,
}

impl Relation {
    pub const ALL: [Relation; 9] = [
        Relation::IntentionIs,
        Relation::LateralVelocityIs,
        Relation::LateralAccelerationIs,
        Relation::PrecedingTtcIs,
        Relation::LeftPrecedingTtcIs,
        Relation::RightPrecedingTtcIs,
        Relation::LeftFollowingTtcIs,
        Relation::RightFollowingTtcIs,
        Relation::HasChild,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::IntentionIs => "INTENTION_IS",
            Relation::LateralVelocityIs => "LATERAL_VELOCITY_IS",
            Relation::LateralAccelerationIs => "LATERAL_ACCELERATION_IS",
            Relation::PrecedingTtcIs => "PRECEDING_TTC_IS",
            Relation::LeftPrecedingTtcIs => "LEFT_PRECEDING_TTC_IS",
            Relation::RightPrecedingTtcIs => "RIGHT_PRECEDING_TTC_IS",
            Relation::LeftFollowingTtcIs => "LEFT_FOLLOWING_TTC_IS",
            Relation::RightFollowingTtcIs => "RIGHT_FOLLOWING_TTC_IS",
            Relation::HasChild => "HAS_CHILD",
        }
    }

    pub fn object_concept(self) -> Concept {
        match self {
            Relation::IntentionIs => Concept::Intention,
            Relation::LateralVelocityIs => Concept::LatVelocity,
            Relation::LateralAccelerationIs => Concept::LatAcceleration,
            Relation::PrecedingTtcIs => Concept::TtcPreceding,
            Relation::LeftPrecedingTtcIs => Concept::TtcLeftPreceding,
            Relation::RightPrecedingTtcIs => Concept::TtcRightPreceding,
            Relation::LeftFollowingTtcIs => Concept::TtcLeftFollowing,
            Relation::RightFollowingTtcIs => Concept::TtcRightFollowing,
            Relation::HasChild => Concept::VehicleId,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| OntologyError::UnknownRelation { name: s.to_owned() })
    }
}

/// Lane-change intention, the hypothesis space of the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Intention {
    #[serde(rename = "LLC")]
    Llc,
    #[serde(rename = "LK")]
    Lk,
    #[serde(rename = "RLC")]
    Rlc,
}

impl Intention {
    pub const ALL: [Intention; 3] = [Intention::Llc, Intention::Lk, Intention::Rlc];

    pub fn name(self) -> &'static str {
        match self {
            Intention::Llc => "LLC",
            Intention::Lk => "LK",
            Intention::Rlc => "RLC",
        }
    }

    /// Dense position in `ALL`.
    pub fn index(self) -> usize {
        match self {
            Intention::Llc => 0,
            Intention::Lk => 1,
            Intention::Rlc => 2,
        }
    }
}

impl fmt::Display for Intention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Intention {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Intention::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| OntologyError::HypothesisNotIntention(s.to_owned()))
    }
}

/// Direction category shared by lateral velocity and lateral acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lateral {
    Left,
    Straight,
    Right,
}

impl Lateral {
    pub const ALL: [Lateral; 3] = [Lateral::Left, Lateral::Straight, Lateral::Right];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Risk {
    High,
    Medium,
    Low,
}

impl Risk {
    pub const ALL: [Risk; 3] = [Risk::High, Risk::Medium, Risk::Low];

    fn prefix(self) -> &'static str {
        match self {
            Risk::High => "highRisk",
            Risk::Medium => "mediumRisk",
            Risk::Low => "lowRisk",
        }
    }
}

/// The five surrounding-vehicle positions that carry a TTC feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NeighborSlot {
    Preceding,
    LeftPreceding,
    RightPreceding,
    LeftFollowing,
    RightFollowing,
}

impl NeighborSlot {
    pub const ALL: [NeighborSlot; 5] = [
        NeighborSlot::Preceding,
        NeighborSlot::LeftPreceding,
        NeighborSlot::RightPreceding,
        NeighborSlot::LeftFollowing,
        NeighborSlot::RightFollowing,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_following(self) -> bool {
        matches!(self, NeighborSlot::LeftFollowing | NeighborSlot::RightFollowing)
    }

    fn suffix(self) -> &'static str {
        match self {
            NeighborSlot::Preceding => "Preceding",
            NeighborSlot::LeftPreceding => "LeftPreceding",
            NeighborSlot::RightPreceding => "RightPreceding",
            NeighborSlot::LeftFollowing => "LeftFollowing",
            NeighborSlot::RightFollowing => "RightFollowing",
        }
    }

    pub fn concept(self) -> Concept {
        match self {
            NeighborSlot::Preceding => Concept::TtcPreceding,
            NeighborSlot::LeftPreceding => Concept::TtcLeftPreceding,
            NeighborSlot::RightPreceding => Concept::TtcRightPreceding,
            NeighborSlot::LeftFollowing => Concept::TtcLeftFollowing,
            NeighborSlot::RightFollowing => Concept::TtcRightFollowing,
        }
    }
}

/// A linguistic category instance of one of the seven evidence concepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    LatVelocity(Lateral),
    LatAcceleration(Lateral),
    Ttc(NeighborSlot, Risk),
}

impl Category {
    /// All 21 evidence categories, grouped by concept in ontology order.
    pub fn all() -> impl Iterator<Item = Category> {
        let kinematic = Lateral::ALL
            .into_iter()
            .map(Category::LatVelocity)
            .chain(Lateral::ALL.into_iter().map(Category::LatAcceleration));
        let ttc = NeighborSlot::ALL
            .into_iter()
            .flat_map(|slot| Risk::ALL.into_iter().map(move |risk| Category::Ttc(slot, risk)));
        kinematic.chain(ttc)
    }

    pub fn concept(self) -> Concept {
        match self {
            Category::LatVelocity(_) => Concept::LatVelocity,
            Category::LatAcceleration(_) => Concept::LatAcceleration,
            Category::Ttc(slot, _) => slot.concept(),
        }
    }

    pub fn relation(self) -> Relation {
        self.concept()
            .relation()
            .expect("evidence concepts always have a relation")
    }

    /// Position of this category's concept among the seven evidence slots.
    pub fn slot_index(self) -> usize {
        match self {
            Category::LatVelocity(_) => 0,
            Category::LatAcceleration(_) => 1,
            Category::Ttc(slot, _) => 2 + slot.index(),
        }
    }

    pub fn name(self) -> String {
        match self {
            Category::LatVelocity(Lateral::Left) => "movingLeft".into(),
            Category::LatVelocity(Lateral::Straight) => "movingStraight".into(),
            Category::LatVelocity(Lateral::Right) => "movingRight".into(),
            Category::LatAcceleration(Lateral::Left) => "leftAcceleration".into(),
            Category::LatAcceleration(Lateral::Straight) => "zeroAcceleration".into(),
            Category::LatAcceleration(Lateral::Right) => "rightAcceleration".into(),
            Category::Ttc(slot, risk) => format!("{}{}", risk.prefix(), slot.suffix()),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Category {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::all()
            .find(|c| c.name() == s)
            .ok_or_else(|| OntologyError::UnknownEntity {
                field: "category",
                name: s.to_owned(),
            })
    }
}

/// Per-frame child identifier; a vehicle gets a fresh one in every frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChildId(pub u64);

impl fmt::Display for ChildId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Any node of the knowledge graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entity {
    Vehicle,
    Intention(Intention),
    Category(Category),
    Child(ChildId),
}

impl Entity {
    pub const VEHICLE_NAME: &'static str = "vehicle";

    pub fn concept(self) -> Concept {
        match self {
            Entity::Vehicle => Concept::Vehicle,
            Entity::Intention(_) => Concept::Intention,
            Entity::Category(c) => c.concept(),
            Entity::Child(_) => Concept::VehicleId,
        }
    }

    /// Every non-child entity of the ontology, in a fixed order.
    pub fn schema_entities() -> impl Iterator<Item = Entity> {
        std::iter::once(Entity::Vehicle)
            .chain(Intention::ALL.into_iter().map(Entity::Intention))
            .chain(Category::all().map(Entity::Category))
    }

    pub fn parse(name: &str) -> Result<Entity, OntologyError> {
        if name == Self::VEHICLE_NAME {
            return Ok(Entity::Vehicle);
        }
        if let Ok(i) = name.parse::<Intention>() {
            return Ok(Entity::Intention(i));
        }
        if let Ok(c) = name.parse::<Category>() {
            return Ok(Entity::Category(c));
        }
        if !name.is_empty() && name.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(id) = name.parse::<u64>() {
                return Ok(Entity::Child(ChildId(id)));
            }
        }
        Err(OntologyError::UnknownEntity {
            field: "entity",
            name: name.to_owned(),
        })
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Vehicle => f.write_str(Self::VEHICLE_NAME),
            Entity::Intention(i) => i.fmt(f),
            Entity::Category(c) => c.fmt(f),
            Entity::Child(id) => id.fmt(f),
        }
    }
}

impl From<Intention> for Entity {
    fn from(i: Intention) -> Self {
        Entity::Intention(i)
    }
}

impl From<Category> for Entity {
    fn from(c: Category) -> Self {
        Entity::Category(c)
    }
}

impl From<ChildId> for Entity {
    fn from(c: ChildId) -> Self {
        Entity::Child(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Entity,
    pub predicate: Relation,
    pub object: Entity,
}

impl Triple {
    pub fn new(subject: impl Into<Entity>, predicate: Relation, object: impl Into<Entity>) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }

    /// Parse and validate a triple given in its serialized string form.
    pub fn parse(subject: &str, predicate: &str, object: &str) -> Result<Triple, OntologyError> {
        let predicate: Relation = predicate.parse()?;
        let subject = Entity::parse(subject).map_err(|_| OntologyError::UnknownEntity {
            field: "subject",
            name: subject.to_owned(),
        })?;
        let object = Entity::parse(object).map_err(|_| OntologyError::UnknownEntity {
            field: "object",
            name: object.to_owned(),
        })?;
        let triple = Triple {
            subject,
            predicate,
            object,
        };
        triple.validate()?;
        Ok(triple)
    }

    /// Check object concept and subject role against the ontology.
    pub fn validate(&self) -> Result<(), OntologyError> {
        let expected = self.predicate.object_concept();
        if self.object.concept() != expected {
            return Err(OntologyError::ObjectConceptMismatch {
                field: "object",
                relation: self.predicate,
                entity: self.object.to_string(),
                expected,
            });
        }
        let subject_ok = match self.subject {
            Entity::Vehicle | Entity::Child(_) => true,
            // conditioned evidence: <category, INTENTION_IS, hypothesis>
            Entity::Category(_) => self.predicate == Relation::IntentionIs,
            Entity::Intention(_) => false,
        };
        if !subject_ok {
            return Err(OntologyError::InvalidSubject {
                relation: self.predicate,
                entity: self.subject.to_string(),
            });
        }
        Ok(())
    }

    /// Recover the evidence category of a reified (conditioned or not) evidence triple.
    pub fn evidence_category(&self) -> Option<Category> {
        match (self.subject, self.object) {
            (_, Entity::Category(c)) => Some(c),
            (Entity::Category(c), Entity::Intention(_)) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.subject, self.predicate, self.object)
    }
}

/// `<subject, relation_for(category), category>` where the subject is the
/// generic `vehicle` or a per-frame child.
pub fn reify_evidence(category: Category, subject: Entity) -> Result<Triple, OntologyError> {
    match subject {
        Entity::Vehicle | Entity::Child(_) => Ok(Triple::new(subject, category.relation(), category)),
        other => Err(OntologyError::InvalidSubject {
            relation: category.relation(),
            entity: other.to_string(),
        }),
    }
}

/// Reify an instance of any concept onto a subject; fails for `vehicle` itself.
pub fn reify_instance(object: Entity, subject: Entity) -> Result<Triple, OntologyError> {
    let relation = object.concept().relation()?;
    let t = Triple::new(subject, relation, object);
    t.validate()?;
    Ok(t)
}

/// `<category, INTENTION_IS, hypothesis>`: evidence conditioned on a hypothesis.
pub fn reify_conditioned_evidence(category: Category, hypothesis: Entity) -> Result<Triple, OntologyError> {
    match hypothesis {
        Entity::Intention(h) => Ok(Triple::new(category, Relation::IntentionIs, h)),
        other => Err(OntologyError::HypothesisNotIntention(other.to_string())),
    }
}

#[derive(Debug, Serialize)]
struct ConceptDoc {
    name: &'static str,
    relation: Option<&'static str>,
    instances: Vec<String>,
}

#[derive(Debug, Serialize)]
struct RelationDoc {
    name: &'static str,
    object_concept: &'static str,
}

#[derive(Debug, Serialize)]
struct OntologyDoc {
    concepts: Vec<ConceptDoc>,
    relations: Vec<RelationDoc>,
}

/// JSON reference document of the whole ontology.
pub fn reference_json() -> serde_json::Value {
    let concepts = Concept::ALL
        .into_iter()
        .map(|concept| {
            let instances = match concept {
                Concept::Intention => Intention::ALL.iter().map(|i| i.name().to_owned()).collect(),
                Concept::VehicleId => vec!["<per-frame numeric id>".to_owned()],
                Concept::Vehicle => vec![Entity::VEHICLE_NAME.to_owned()],
                _ => Category::all()
                    .filter(|c| c.concept() == concept)
                    .map(|c| c.name())
                    .collect(),
            };
            ConceptDoc {
                name: concept.name(),
                relation: concept.relation().ok().map(Relation::name),
                instances,
            }
        })
        .collect();
    let relations = Relation::ALL
        .into_iter()
        .map(|r| RelationDoc {
            name: r.name(),
            object_concept: r.object_concept().name(),
        })
        .collect();
    serde_json::to_value(OntologyDoc { concepts, relations }).expect("ontology document serializes")
}
