use alloc::vec::Vec;

/// Something that can be broadcast and cached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ItemRef {
    /// A whole content object.
    Object { object_id: u32 },
    /// Packet `index` of a PET-encoded group.
    PetPacket { group: u32, index: usize },
}

impl ItemRef {
    pub fn object(object_id: u32) -> Self {
        ItemRef::Object { object_id }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Channel {
    Broadcast,
    Cellular,
    /// The single channel of a shared-budget evaluation.
    Shared,
}

/// Transmission of one item on the broadcast channel. Every user hears it;
/// only users with a matching cache directive keep it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BroadcastAction {
    pub item: ItemRef,
    pub start_s: f64,
    pub duration_s: f64,
    /// Share of the broadcast channel this action occupies.
    pub bandwidth_hz: f64,
}

/// Transmission of one object to one user on the cellular channel.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnicastAction {
    pub user_id: u32,
    pub object_id: u32,
    pub start_s: f64,
    pub duration_s: f64,
    pub bandwidth_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CacheTarget {
    AllUsers,
    User(u32),
}

impl CacheTarget {
    pub fn applies_to(&self, user: u32) -> bool {
        match self {
            CacheTarget::AllUsers => true,
            CacheTarget::User(u) => *u == user,
        }
    }
}

/// Reserves cache space for `item` from `admit_at_s` until `evict_at_s`
/// (or the end of the horizon). Any broadcast of the item completing while
/// the slot is open is stored.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CacheDirective {
    pub target: CacheTarget,
    pub item: ItemRef,
    pub admit_at_s: f64,
    pub evict_at_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PetSegmentRef {
    pub object_id: u32,
    /// Distinct packets needed to decode this object.
    pub k: usize,
}

/// A set of objects jointly PET-encoded into `n_packets` packets.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PetGroup {
    pub id: u32,
    pub n_packets: usize,
    /// `8 · Γ`.
    pub packet_bits: u64,
    pub segments: Vec<PetSegmentRef>,
}

/// Timed broadcast and unicast transmissions plus cache placements.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeliveryPlan {
    pub broadcast_actions: Vec<BroadcastAction>,
    pub unicast_actions: Vec<UnicastAction>,
    pub cache_directives: Vec<CacheDirective>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub pet_groups: Vec<PetGroup>,
}

impl DeliveryPlan {
    pub fn is_empty(&self) -> bool {
        self.broadcast_actions.is_empty() && self.unicast_actions.is_empty()
    }
}
