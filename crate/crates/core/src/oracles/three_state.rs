//! The wall / spreading / empty process on a finite segment of the line.
//!
//! Walls and spreading sites never change; an empty site next to a
//! spreading site becomes spreading in the following round. Cells outside
//! the segment are frozen and never spread.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteState {
    Wall,
    Spreading,
    Empty,
}

/// One synchronous round; returns whether any site changed.
pub fn segment_step(sites: &mut [SiteState]) -> bool {
    let spreads: Vec<usize> = (0..sites.len())
        .filter(|&i| {
            sites[i] == SiteState::Empty
                && ((i > 0 && sites[i - 1] == SiteState::Spreading)
                    || (i + 1 < sites.len() && sites[i + 1] == SiteState::Spreading))
        })
        .collect();
    for &i in &spreads {
        sites[i] = SiteState::Spreading;
    }
    !spreads.is_empty()
}

/// Final states: an empty site ends spreading iff the nearest non-empty
/// site on its left or on its right is spreading.
pub fn segment_fixpoint(sites: &mut [SiteState]) {
    let mut carry = false;
    let mut from_left = vec![false; sites.len()];
    for (i, s) in sites.iter().enumerate() {
        match s {
            SiteState::Wall => carry = false,
            SiteState::Spreading => carry = true,
            SiteState::Empty => from_left[i] = carry,
        }
    }
    carry = false;
    for i in (0..sites.len()).rev() {
        match sites[i] {
            SiteState::Wall => carry = false,
            SiteState::Spreading => carry = true,
            SiteState::Empty => {
                if carry || from_left[i] {
                    sites[i] = SiteState::Spreading;
                }
            }
        }
    }
}
