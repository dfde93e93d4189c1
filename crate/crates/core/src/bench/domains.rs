//! PDDL sources of the STRIPS benchmark domains.

pub const VISITALL: &str = "
(define (domain visitall)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (visited ?c - cell) (adjacent ?a - cell ?b - cell))
  (:action move
    :parameters (?from - cell ?to - cell)
    :precondition (and (at ?from) (adjacent ?from ?to))
    :effect (and (at ?to) (visited ?to) (not (at ?from)))))";

/// The target cell is a sink: the agent cannot leave it. Moves leave a trail
/// and the goal asks for every cell between start and target.
pub const CORRIDOR: &str = "
(define (domain corridor)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (visited ?c - cell) (adjacent ?a - cell ?b - cell) (passable ?c - cell))
  (:action move
    :parameters (?from - cell ?to - cell)
    :precondition (and (at ?from) (adjacent ?from ?to) (passable ?from))
    :effect (and (at ?to) (visited ?to) (not (at ?from)))))";

pub const LOCK: &str = "
(define (domain lock)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (adjacent ?a - cell ?b - cell) (locked ?c - cell) (unlocked ?c - cell))
  (:action move
    :parameters (?from - cell ?to - cell)
    :precondition (and (at ?from) (adjacent ?from ?to))
    :effect (and (at ?to) (not (at ?from))))
  (:action open
    :parameters (?c - cell)
    :precondition (and (at ?c) (locked ?c))
    :effect (and (unlocked ?c) (not (locked ?c)))))";

/// Single-gripper variant.
pub const GRIPPER: &str = "
(define (domain gripper)
  (:requirements :strips :typing)
  (:types room ball)
  (:predicates (at-robby ?r - room) (at ?b - ball ?r - room) (free) (carry ?b - ball))
  (:action move
    :parameters (?from - room ?to - room)
    :precondition (and (at-robby ?from))
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action pick
    :parameters (?b - ball ?r - room)
    :precondition (and (at ?b ?r) (at-robby ?r) (free))
    :effect (and (carry ?b) (not (at ?b ?r)) (not (free))))
  (:action drop
    :parameters (?b - ball ?r - room)
    :precondition (and (carry ?b) (at-robby ?r))
    :effect (and (at ?b ?r) (free) (not (carry ?b)))))";

pub const ONTABLE: &str = "
(define (domain ontable)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block)
               (handempty) (holding ?x - block))
  (:action pickup
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action putdown
    :parameters (?x - block)
    :precondition (and (holding ?x))
    :effect (and (ontable ?x) (clear ?x) (handempty) (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty)))))";

/// Every host goes through the same six-step attack chain.
pub const INTRUSION: &str = "
(define (domain intrusion)
  (:requirements :strips :typing)
  (:types host)
  (:predicates (recon-done ?h - host) (info-gathered ?h - host) (broken-in ?h - host)
               (root-gained ?h - host) (files-downloaded ?h - host) (data-stolen ?h - host))
  (:action recon
    :parameters (?h - host)
    :precondition (and)
    :effect (and (recon-done ?h)))
  (:action gather-information
    :parameters (?h - host)
    :precondition (and (recon-done ?h))
    :effect (and (info-gathered ?h)))
  (:action break-into
    :parameters (?h - host)
    :precondition (and (info-gathered ?h))
    :effect (and (broken-in ?h)))
  (:action gain-root
    :parameters (?h - host)
    :precondition (and (broken-in ?h))
    :effect (and (root-gained ?h)))
  (:action download-files
    :parameters (?h - host)
    :precondition (and (root-gained ?h))
    :effect (and (files-downloaded ?h)))
  (:action steal-data
    :parameters (?h - host)
    :precondition (and (files-downloaded ?h))
    :effect (and (data-stolen ?h))))";

pub const BAKING: &str = "
(define (domain baking)
  (:requirements :strips :typing)
  (:types egg flour pan oven cake soap)
  (:predicates (egg-available ?e - egg) (flour-available ?f - flour) (pan-clean ?p - pan)
               (egg-in ?p - pan) (flour-in ?p - pan) (mixed ?p - pan) (pan-in-oven ?p - pan ?o - oven)
               (oven-free ?o - oven) (baked ?c - cake) (cake-pending ?c - cake) (soap-available ?s - soap))
  (:action put-egg-in-pan
    :parameters (?e - egg ?p - pan)
    :precondition (and (egg-available ?e) (pan-clean ?p))
    :effect (and (egg-in ?p) (not (egg-available ?e))))
  (:action put-flour-in-pan
    :parameters (?f - flour ?p - pan)
    :precondition (and (flour-available ?f) (pan-clean ?p))
    :effect (and (flour-in ?p) (not (flour-available ?f))))
  (:action mix
    :parameters (?p - pan)
    :precondition (and (egg-in ?p) (flour-in ?p))
    :effect (and (mixed ?p) (not (egg-in ?p)) (not (flour-in ?p)) (not (pan-clean ?p))))
  (:action put-pan-in-oven
    :parameters (?p - pan ?o - oven)
    :precondition (and (mixed ?p) (oven-free ?o))
    :effect (and (pan-in-oven ?p ?o) (not (oven-free ?o))))
  (:action bake-cake
    :parameters (?p - pan ?o - oven ?c - cake)
    :precondition (and (pan-in-oven ?p ?o) (mixed ?p) (cake-pending ?c))
    :effect (and (baked ?c) (not (mixed ?p)) (not (cake-pending ?c))))
  (:action remove-pan-from-oven
    :parameters (?p - pan ?o - oven)
    :precondition (and (pan-in-oven ?p ?o))
    :effect (and (oven-free ?o) (not (pan-in-oven ?p ?o))))
  (:action clean-pan
    :parameters (?p - pan ?s - soap)
    :precondition (and (soap-available ?s))
    :effect (and (pan-clean ?p) (not (soap-available ?s)))))";

pub const SPANNER: &str = "
(define (domain spanner)
  (:requirements :strips :typing)
  (:types location man spanner nut)
  (:predicates (at-man ?m - man ?l - location) (at-spanner ?s - spanner ?l - location)
               (at-nut ?n - nut ?l - location) (carrying ?m - man ?s - spanner)
               (useable ?s - spanner) (link ?a - location ?b - location)
               (tightened ?n - nut) (loose ?n - nut))
  (:action walk
    :parameters (?start - location ?end - location ?m - man)
    :precondition (and (at-man ?m ?start) (link ?start ?end))
    :effect (and (at-man ?m ?end) (not (at-man ?m ?start))))
  (:action pickup-spanner
    :parameters (?l - location ?s - spanner ?m - man)
    :precondition (and (at-man ?m ?l) (at-spanner ?s ?l))
    :effect (and (carrying ?m ?s) (not (at-spanner ?s ?l))))
  (:action tighten-nut
    :parameters (?l - location ?s - spanner ?m - man ?n - nut)
    :precondition (and (at-man ?m ?l) (at-nut ?n ?l) (carrying ?m ?s) (useable ?s) (loose ?n))
    :effect (and (tightened ?n) (not (loose ?n)) (not (useable ?s)))))";
