#!/usr/bin/env python3
"""Regenerate the bundled coarse POS lexicon.

Expands stem lists with regular English morphology (noun plurals, verb
inflections, adjective comparatives) and writes word<TAB>TAG lines sorted
by word.  Collisions keep the first tag added; insertion order below is
function words, verbs, nouns, adjectives, which resolves ambiguous words
("barks", "rings") toward their caption-frequent reading.

Usage: python3 tools/gen_lexicon.py src/capcal/data/lexicon.tsv
"""

import sys

VOWELS = set("aeiou")

FUNCTION_WORDS = """
a an the this that these those some any no every each either neither both all
most many much few several such what which whose whatever whichever
i you he she it we they me him her us them mine yours hers ours theirs my your
his its our their myself yourself himself herself itself ourselves themselves
yourselves who whom somebody someone something anybody anyone anything nobody
nothing everybody everyone everything one ones other others another
in on at by to from of with without within into onto upon for against about
above below over under underneath beneath behind before after during between
among along across through throughout around near beside besides beyond past
off out up down toward towards until till since despite except per via amid
and or but nor so yet if unless because although though while whereas than as
whether once when whenever where wherever why how however moreover therefore
thus hence meanwhile otherwise instead furthermore nevertheless nonetheless
be am is are was were been being do does did doing done have has had having
will would shall should can could may might must ought need dare
not never no yes maybe perhaps possibly probably certainly definitely surely
indeed almost nearly quite very really extremely fairly rather somewhat
slightly too also just only even still already soon now then here there
everywhere nowhere somewhere anywhere nearby far away back forth again often
always sometimes usually rarely seldom frequently occasionally constantly
continuously repeatedly intermittently periodically gradually suddenly
abruptly slowly quickly rapidly swiftly briefly momentarily instantly
immediately finally eventually initially early late later earlier afterwards
meanwhile loudly quietly softly gently faintly heavily lightly sharply
steadily rhythmically randomly together apart aside forward backward upward
downward overhead outside inside indoors outdoors upstairs downstairs
once twice thrice halfway anymore anyway somehow anyhow altogether
zero one two three four five six seven eight nine ten eleven twelve thirteen
fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty
fifty sixty seventy eighty ninety hundred thousand million first second third
fourth fifth sixth seventh eighth ninth tenth next last former latter
dont doesnt didnt isnt arent wasnt werent cant wont couldnt wouldnt shouldnt
hasnt havent hadnt im ive youre theyre weve youve hes shes whats thats theres
oh ah hey hello hi okay ok please thanks welcome goodbye
""".split()

# Verb stems inflected regularly unless listed in IRREGULAR_VERBS.
VERB_STEMS = """
bark meow moo neigh bray bleat cluck quack honk hoot chirp tweet squawk caw
trumpet trill coo warble screech squeal yelp howl growl snarl whine whimper
purr hiss buzz hum drone whir whirr click clack tick beep bleep chime ding
ring jingle tinkle rattle rumble roar boom thud thump clang clank clatter
bang clap slap pat tap knock pound smash crash thunder blast explode erupt
pop crack snap crackle crunch rustle creak squeak groan grate scrape scratch
grind drill saw hammer chisel sand file weld rivet bolt screw nail staple
chop slice carve peel whisk stir knead sift
drip leak trickle gurgle slosh splash spray squirt sprinkle drizzle pour
spill gush spout spurt flow surge swirl churn ripple bubble foam froth fizz
sizzle simmer boil steam hiss whoosh swish swoosh whistle wail blare toot
siren shriek yodel chant hum cheer applaud boo heckle whoop holler
talk speak say tell ask answer reply respond call shout yell scream cry sob
weep laugh giggle chuckle snicker whisper murmur mumble mutter chatter babble
stutter stammer lisp slur announce narrate describe explain mention state
sneeze cough sniff sniffle snort snore wheeze breathe inhale exhale gasp pant
sigh yawn hiccup burp belch gargle swallow chew munch bite nibble lick slurp
gulp sip drink eat devour gobble taste smell sniff hear listen overhear see
look watch observe notice glance stare gaze peek squint blink wink nod shrug
walk run jog sprint dash race march stroll saunter wander roam stray step
stomp stamp trudge plod shuffle limp hobble stagger stumble trip drag crawl
creep sneak tiptoe climb scramble clamber jump leap hop skip bounce vault
fall drop tumble topple plunge plummet slip slide glide coast drift float
roll spin whirl twirl rotate revolve turn twist wind swing sway rock wobble
teeter totter shake tremble shiver quiver vibrate shudder jolt jerk twitch
flap flutter wave flail wiggle squirm wriggle fidget
move stop halt pause wait stay remain stand sit kneel squat crouch lean lie
rest relax sleep nap doze snooze wake rouse rise lift raise hoist heave lower
push pull tug yank shove nudge press squeeze pinch grip grasp grab clutch
snatch seize hold carry lug haul tote catch throw toss hurl fling pitch lob
kick punch jab poke prod strike hit whack thwack swat smack wallop batter
crush squash flatten dent bend fold crease crumple wrinkle tear rip shred
split break shatter fracture chip crumble collapse cave buckle burst rupture
open close shut slam lock unlock latch unlatch bolt fasten unfasten zip unzip
button snap buckle tie untie knot wrap unwrap cover uncover seal unseal plug
drive ride steer park reverse accelerate decelerate rev idle stall cruise
brake skid swerve veer merge overtake tow haul ship freight ferry shuttle
fly soar glide hover land taxi launch sail row paddle pedal cycle skate ski
surf dive swim wade paddle splash float sink submerge surface dock moor
load unload dump tip pile stack heap arrange sort shuffle deal
build construct assemble erect demolish dismantle wreck raze repair fix mend
patch install mount attach detach connect disconnect join link couple fasten
paint coat varnish polish buff wax scrub wash rinse soak lather scour wipe
mop sweep dust vacuum clean tidy clear
cook bake roast grill fry saute toast broil stew braise steam microwave heat
warm cool chill freeze thaw melt burn scorch char singe toast
plant sow water weed prune trim mow rake hoe dig burrow bury excavate
grow sprout bloom blossom wilt wither fade
work operate function run malfunction jam seize whirl
play perform practice rehearse strum pluck pick bow fiddle drum beat pound
blow toot blast conduct compose improvise jam harmonize sing serenade
record tape broadcast transmit tune dial amplify mute echo reverberate
resonate resound project
take give get put set keep let leave bring send deliver fetch retrieve
find search seek hunt locate discover spot detect track trace follow chase
pursue flee escape evade dodge duck hide lurk stalk prowl ambush
come go enter exit depart arrive return approach near pass cross traverse
begin start commence continue proceed resume finish end conclude cease quit
read write print type scribble jot draw sketch doodle trace sign
point gesture beckon signal motion salute
fill empty drain pump siphon pour funnel
hang dangle suspend droop sag drape
bump collide ram jostle brush graze skim
""".split()

# stem -> (3sg, past, past-participle(unused), gerund)
IRREGULAR_VERBS = {
    "say": ("says", "said", "said", "saying"),
    "tell": ("tells", "told", "told", "telling"),
    "speak": ("speaks", "spoke", "spoken", "speaking"),
    "sing": ("sings", "sang", "sung", "singing"),
    "ring": ("rings", "rang", "rung", "ringing"),
    "run": ("runs", "ran", "run", "running"),
    "come": ("comes", "came", "come", "coming"),
    "go": ("goes", "went", "gone", "going"),
    "make": ("makes", "made", "made", "making"),
    "take": ("takes", "took", "taken", "taking"),
    "give": ("gives", "gave", "given", "giving"),
    "get": ("gets", "got", "gotten", "getting"),
    "put": ("puts", "put", "put", "putting"),
    "set": ("sets", "set", "set", "setting"),
    "let": ("lets", "let", "let", "letting"),
    "begin": ("begins", "began", "begun", "beginning"),
    "become": ("becomes", "became", "become", "becoming"),
    "leave": ("leaves", "left", "left", "leaving"),
    "find": ("finds", "found", "found", "finding"),
    "lose": ("loses", "lost", "lost", "losing"),
    "win": ("wins", "won", "won", "winning"),
    "think": ("thinks", "thought", "thought", "thinking"),
    "know": ("knows", "knew", "known", "knowing"),
    "hear": ("hears", "heard", "heard", "hearing"),
    "see": ("sees", "saw", "seen", "seeing"),
    "eat": ("eats", "ate", "eaten", "eating"),
    "drink": ("drinks", "drank", "drunk", "drinking"),
    "fall": ("falls", "fell", "fallen", "falling"),
    "fly": ("flies", "flew", "flown", "flying"),
    "ride": ("rides", "rode", "ridden", "riding"),
    "drive": ("drives", "drove", "driven", "driving"),
    "break": ("breaks", "broke", "broken", "breaking"),
    "catch": ("catches", "caught", "caught", "catching"),
    "throw": ("throws", "threw", "thrown", "throwing"),
    "hit": ("hits", "hit", "hit", "hitting"),
    "cut": ("cuts", "cut", "cut", "cutting"),
    "shut": ("shuts", "shut", "shut", "shutting"),
    "read": ("reads", "read", "read", "reading"),
    "write": ("writes", "wrote", "written", "writing"),
    "draw": ("draws", "drew", "drawn", "drawing"),
    "grow": ("grows", "grew", "grown", "growing"),
    "blow": ("blows", "blew", "blown", "blowing"),
    "swim": ("swims", "swam", "swum", "swimming"),
    "sit": ("sits", "sat", "sat", "sitting"),
    "stand": ("stands", "stood", "stood", "standing"),
    "lie": ("lies", "lay", "lain", "lying"),
    "sleep": ("sleeps", "slept", "slept", "sleeping"),
    "wake": ("wakes", "woke", "woken", "waking"),
    "rise": ("rises", "rose", "risen", "rising"),
    "hold": ("holds", "held", "held", "holding"),
    "bring": ("brings", "brought", "brought", "bringing"),
    "send": ("sends", "sent", "sent", "sending"),
    "teach": ("teaches", "taught", "taught", "teaching"),
    "bend": ("bends", "bent", "bent", "bending"),
    "hang": ("hangs", "hung", "hung", "hanging"),
    "sink": ("sinks", "sank", "sunk", "sinking"),
    "dive": ("dives", "dove", "dived", "diving"),
    "creep": ("creeps", "crept", "crept", "creeping"),
    "sweep": ("sweeps", "swept", "swept", "sweeping"),
    "weep": ("weeps", "wept", "wept", "weeping"),
    "leap": ("leaps", "leapt", "leapt", "leaping"),
    "keep": ("keeps", "kept", "kept", "keeping"),
    "mean": ("means", "meant", "meant", "meaning"),
    "strike": ("strikes", "struck", "struck", "striking"),
    "shake": ("shakes", "shook", "shaken", "shaking"),
    "freeze": ("freezes", "froze", "frozen", "freezing"),
    "wind": ("winds", "wound", "wound", "winding"),
    "grind": ("grinds", "ground", "ground", "grinding"),
    "tear": ("tears", "tore", "torn", "tearing"),
    "wear": ("wears", "wore", "worn", "wearing"),
    "burst": ("bursts", "burst", "burst", "bursting"),
    "split": ("splits", "split", "split", "splitting"),
    "spin": ("spins", "spun", "spun", "spinning"),
    "dig": ("digs", "dug", "dug", "digging"),
    "stick": ("sticks", "stuck", "stuck", "sticking"),
    "feed": ("feeds", "fed", "fed", "feeding"),
    "flee": ("flees", "fled", "fled", "fleeing"),
    "seek": ("seeks", "sought", "sought", "seeking"),
    "fight": ("fights", "fought", "fought", "fighting"),
    "buy": ("buys", "bought", "bought", "buying"),
    "sell": ("sells", "sold", "sold", "selling"),
    "pay": ("pays", "paid", "paid", "paying"),
    "build": ("builds", "built", "built", "building"),
    "deal": ("deals", "dealt", "dealt", "dealing"),
    "beat": ("beats", "beat", "beaten", "beating"),
    "slide": ("slides", "slid", "slid", "sliding"),
    "swing": ("swings", "swung", "swung", "swinging"),
    "cling": ("clings", "clung", "clung", "clinging"),
    "fling": ("flings", "flung", "flung", "flinging"),
    "sting": ("stings", "stung", "stung", "stinging"),
    "swear": ("swears", "swore", "sworn", "swearing"),
    "steal": ("steals", "stole", "stolen", "stealing"),
    "bite": ("bites", "bit", "bitten", "biting"),
    "hide": ("hides", "hid", "hidden", "hiding"),
    "shoot": ("shoots", "shot", "shot", "shooting"),
    "spit": ("spits", "spat", "spat", "spitting"),
    "spread": ("spreads", "spread", "spread", "spreading"),
    "shrink": ("shrinks", "shrank", "shrunk", "shrinking"),
    "stink": ("stinks", "stank", "stunk", "stinking"),
    "understand": ("understands", "understood", "understood", "understanding"),
    "forget": ("forgets", "forgot", "forgotten", "forgetting"),
}

NOUN_STEMS = """
dog cat bird horse pony cow bull calf pig sheep lamb goat duck goose
chicken rooster hen chick turkey crow raven owl pigeon dove seagull gull
sparrow robin finch wren jay eagle hawk falcon vulture heron crane swan
pelican parrot canary peacock woodpecker hummingbird frog toad cricket
grasshopper cicada beetle insect bug bee wasp hornet fly mosquito moth
butterfly dragonfly ant spider worm snail snake lizard turtle crocodile
alligator lion tiger bear wolf coyote fox deer elk moose rabbit hare mouse
rat squirrel chipmunk beaver otter raccoon skunk badger bat monkey ape
gorilla elephant giraffe zebra camel donkey mule whale dolphin seal shark
fish trout salmon crab lobster shrimp octopus kitten puppy cub foal animal
creature beast herd flock pack swarm pet
man woman child boy girl baby infant toddler adult person crowd group
audience speaker singer musician artist performer worker driver pilot
captain sailor soldier officer guard policeman firefighter doctor nurse
teacher student friend neighbor stranger visitor guest host announcer
reporter narrator vendor customer player athlete runner swimmer dancer
actor priest farmer shepherd hunter fisherman carpenter plumber mechanic
engineer chef cook baker waiter waitress bartender janitor clerk cashier
king queen lady gentleman guy kid mother father parent brother sister son
daughter uncle aunt cousin grandmother grandfather husband wife couple
family crew team staff
sound noise voice tone pitch timbre echo reverberation music song melody
tune rhythm beat tempo harmony chord note lyric verse chorus anthem
lullaby ballad jingle ringtone bang boom crash thud thump clang clank
clatter rattle rumble roar growl snarl bark howl whine whimper yelp meow
purr hiss chirp tweet squawk caw cluck quack honk hoot moo bleat neigh
bray oink grunt snort squeal screech shriek scream shout yell holler cry
sob wail laugh laughter giggle chuckle snicker whisper murmur mumble
mutter chatter babble hum buzz drone whir click clack tick tock beep
bleep chime ding dong ring tinkle splash drip trickle gurgle slosh swish
swoosh whoosh gust whistle siren alarm bell horn gong knock tap pat slap
clap applause ovation cheer chant hymn carol creak squeak groan grate
crackle crunch rustle snap pop fizz sizzle static feedback distortion
silence pause hush lull blast explosion detonation gunshot gunfire
thunderclap sonar pulse vibration resonance frequency wavelength
amplitude volume loudness acoustics audio soundtrack recording playback
broadcast transmission signal channel station microphone speaker
amplifier stereo headphone earphone earbud headset megaphone loudspeaker
intercom footstep heartbeat
guitar piano violin viola cello fiddle harp lute banjo mandolin ukulele
drum drummer drumstick snare cymbal tambourine xylophone marimba trumpet
trombone tuba bugle flute piccolo clarinet oboe bassoon saxophone
recorder harmonica accordion bagpipe organ keyboard synthesizer
turntable orchestra band ensemble choir quartet conductor instrument
percussion brass woodwind
car truck bus van taxi cab jeep motorcycle moped scooter bicycle bike
train locomotive subway metro tram trolley wagon cart carriage sled
airplane plane aircraft jet glider helicopter chopper blimp balloon
rocket boat ship vessel ferry barge tugboat canoe kayak raft rowboat
sailboat yacht tanker submarine tractor bulldozer excavator crane
forklift mixer snowplow ambulance firetruck engine motor machine
machinery generator compressor turbine piston gearbox clutch throttle
ignition battery radiator exhaust muffler wheel tire axle brake pedal
dashboard windshield wiper bumper hood trunk headlight pump drill
jackhammer chainsaw lawnmower mower trimmer blower vacuum blender
grinder toaster kettle microwave oven stove burner fridge refrigerator
freezer dishwasher washer dryer fan heater furnace boiler conditioner
printer computer laptop tablet phone telephone television radio clock
watch timer metronome camera projector typewriter treadmill elevator
escalator conveyor
rain raindrop rainfall shower downpour drizzle storm thunderstorm
blizzard lightning thunder wind breeze gale draft whirlwind hurricane
tornado snow snowflake hail sleet frost dew fog mist haze cloud sky
horizon sun sunshine sunlight sunrise sunset dusk dawn moon moonlight
star rainbow river stream creek brook waterfall rapids fountain spring
geyser lake pond pool lagoon reservoir ocean sea wave tide surf swell
current whirlpool ripple flood puddle water ice icicle glacier steam
vapor fire flame blaze bonfire campfire ember spark smoke ash earth
ground soil dirt dust mud clay sand gravel pebble rock stone boulder
cliff ledge mountain hill slope ridge peak summit valley gorge canyon
cave tunnel forest wood woods grove orchard thicket jungle tree trunk
branch bough twig stick log stump root leaf acorn bush shrub hedge vine
moss fern grass lawn meadow pasture field prairie desert dune swamp
marsh beach shore coast island bay cove harbor volcano earthquake
avalanche landslide
house home cottage cabin hut shack shed mansion castle tower building
skyscraper apartment room kitchen bathroom bedroom hallway corridor
stairway staircase stair landing lobby basement cellar attic garage
porch patio deck balcony courtyard yard garden greenhouse fence gate
driveway path trail walkway sidewalk pavement curb street road lane
avenue highway freeway intersection crosswalk alley bridge overpass
underpass station terminal platform airport runway hangar port dock
pier wharf jetty marina lighthouse market store shop mall plaza
supermarket bakery restaurant diner cafe cafeteria pub bar tavern inn
hotel church chapel cathedral temple mosque school classroom college
university campus library museum gallery theater cinema auditorium
stage arena stadium gymnasium gym court rink track playground carnival
circus zoo aquarium farm barn stable coop pen silo mill factory
workshop warehouse office hospital clinic laboratory city town village
suburb neighborhood district block downtown site scaffold
table chair stool bench desk counter couch sofa armchair bed mattress
crib cradle hammock pillow cushion blanket quilt sheet towel curtain
blind shutter carpet rug mat lamp lantern light lightbulb chandelier
candle torch flashlight mirror picture painting photograph poster frame
shelf bookcase cabinet cupboard drawer dresser wardrobe closet locker
chest box crate carton container bin basket bag sack pouch suitcase
backpack purse wallet pocket bottle flask jug jar vase pitcher can cup
mug glass plate saucer bowl dish tray pan skillet pot lid spoon ladle
fork knife spatula whisk scissors tool toolbox nail screw bolt hinge
clamp chain link rope cord string twine thread wire cable hose pipe
tube duct gutter drain faucet tap valve nozzle sprinkler tape glue
paper page card cardboard book magazine journal newspaper letter
envelope pen pencil crayon marker chalk brush comb broom mop bucket
pail basin tub sink bathtub toilet ladder key lock padlock latch
handle knob lever button switch dial plug socket outlet charger bulb
toy ball marble balloon kite doll puppet robot puzzle game dice coin
ticket umbrella cane whip net cage leash collar harness saddle anchor
oar paddle rudder mast sail hull keel propeller rotor blade
head face eye ear nose mouth lip tooth tongue throat neck shoulder arm
elbow wrist hand palm finger thumb chest heart lung stomach belly waist
hip back leg thigh knee shin ankle foot heel toe skin hair beard breath
fist muscle bone body footprint shadow silhouette
time moment instant second minute hour day night midnight noon morning
afternoon evening week weekend month year season spring summer autumn
winter holiday birthday beginning start middle end finish event occasion
ceremony celebration festival parade procession concert recital gig
performance show exhibition rehearsal intermission encore session
meeting conference lecture sermon speech debate conversation dialogue
discussion interview announcement news story tale joke word name title
question answer reply response
gap opening hole pit hollow crack crevice slot groove notch dent ditch
trench edge rim corner curve bend loop coil spiral arc circle ring
sphere dome arch column pillar post pole beam plank board panel slab
block brick tile pane grid mesh screen sieve filter layer film crust
shell husk peel surface texture pattern design ornament emblem badge
flag banner marker beacon buoy landmark piece part chunk slice fragment
sliver splinter shard speck fleck particle grain flake chip item object
thing material substance fabric cloth cotton wool silk denim leather
fur canvas nylon plastic rubber foam sponge cork wood timber lumber
bamboo straw hay metal steel iron copper bronze brass aluminum silver
gold ore mineral granite marble chalk coal charcoal diamond pearl
glass crystal ceramic porcelain pottery plaster concrete asphalt tar
wax food bread toast butter cheese egg milk cream sugar salt pepper
sauce soup stew salad meat steak beef pork bacon sausage rice pasta
noodle pizza sandwich burger potato tomato onion carrot pea bean corn
apple banana orange grape lemon cherry berry strawberry melon peach
pear plum nut cake cookie pie candy chocolate coffee tea juice soda
beer wine drink meal breakfast lunch dinner snack
game sport match race whistle scoreboard trophy medal ball football
baseball basketball volleyball soccer tennis golf hockey bat racket
puck gun rifle pistol cannon bomb firework firecracker bullet fuse
trigger arrow sword axe hatchet shield armor job work task hobby chore
errand accident collision crash wreck injury wound pain medicine
bandage rest nap dream idea thought plan problem reason fact detail
clue amount number pair dozen half quarter bunch pile heap stack load
cargo parcel package bundle kit set collection row line queue
shirt blouse sweater hoodie vest jacket coat raincoat cloak robe gown
dress skirt pant pants jeans shorts uniform costume suit pajamas sock
shoe sneaker boot sandal slipper heel sole lace hat cap helmet visor
scarf shawl glove mitten belt buckle strap zipper velcro collar cuff
sleeve apron necklace bracelet earring jewel
""".split()

IRREGULAR_PLURALS = {
    "child": "children", "man": "men", "woman": "women", "person": "people",
    "foot": "feet", "tooth": "teeth", "goose": "geese", "mouse": "mice",
    "ox": "oxen", "die": "dice", "datum": "data",
}

F_TO_VES = {"leaf", "loaf", "shelf", "wolf", "calf", "half", "knife", "wife",
            "life", "thief", "scarf", "hoof", "elf"}

# Mass/uncountable nouns and words whose plural is rare in captions.
NO_PLURAL = set("""
water music laughter applause silence thunder lightning fog mist haze smog
smoke ash soot sand mud clay dust gravel snow hail sleet frost dew ice steam
vapor rain rice bread flour yeast butter cheese milk cream sugar honey salt
pepper beef veal pork ham bacon poultry corn oatmeal porridge cereal
spinach lettuce cabbage broccoli cauliflower gum cocoa vanilla cinnamon
money cash change traffic machinery equipment luggage jewelry underwear
clothing weather static feedback distortion gunfire ammunition gunpowder
percussion sunshine sunlight moonlight starlight air surf erosion
concrete cement mortar asphalt tar wax aluminum tin lead zinc nickel
chrome coal charcoal graphite ivory amber jade plaster pottery denim
leather suede fur fleece felt canvas burlap nylon polyester wool silk
satin velvet cotton linen straw hay thatch timber lumber plywood bamboo
wicker stuff news gossip advice guidance fiction poetry prose scenery
health fitness strength energy vigor stamina endurance fatigue exhaustion
weakness agony wealth abundance acoustics audio slang jargon vocabulary
grammar fun chaos courage pride joy anger fear happiness sadness shorts
pants trousers jeans overalls pajamas tights scissors shears tongs
billiards darts gymnastics swimming diving rowing sailing surfing skiing
skating sledding fishing hunting camping hiking climbing cycling jogging
yoga bowling boxing wrestling archery fencing soccer tennis golf hockey
rugby badminton loudness
""".split())

ADJ_STEMS = """
loud quiet soft noisy silent faint muffled shrill sharp dull deep high low
rapid slow fast quick swift brisk steady constant continuous continual
intermittent sporadic repetitive rhythmic melodic melodious tuneful musical
harmonic harmonious discordant harsh gentle mellow smooth rough gravelly
hoarse raspy gruff throaty husky nasal squeaky creaky tinny metallic
mechanical robotic electronic electric acoustic vocal instrumental audible
inaudible deafening thunderous booming roaring blaring piercing muted
hushed subdued distant near close far faraway remote clear unclear crisp
fuzzy garbled distorted echoing resonant hollow flat
big large small little tiny minute puny huge enormous immense giant
gigantic massive colossal vast bulky hefty heavy weighty light lightweight
thick thin slim slender skinny lean plump chubby stout fat wide broad
narrow cramped spacious roomy long short tall lofty shallow steep gradual
level even uneven full empty solid dense sparse compact loose tight slack
taut rigid stiff flexible limp firm hard tough sturdy rugged durable
fragile brittle delicate flimsy strong mighty powerful forceful weak
feeble frail
new old ancient antique aged elderly young youthful modern recent fresh
stale rotten ripe raw cooked baked fried grilled roasted boiled frozen
thawed melted burnt scorched charred toasted clean dirty filthy grimy
dusty musty moldy stained polished tidy neat messy cluttered wet dry damp
moist soggy soaked drenched humid arid parched hot cold warm cool chilly
frigid freezing frosty icy boiling scalding lukewarm tepid mild
bright dark dim murky gloomy shadowy shady sunny cloudy overcast foggy
misty hazy rainy stormy windy breezy gusty snowy wintry balmy shiny
glossy gleaming glittering sparkling twinkling flickering glowing radiant
luminous brilliant dazzling vivid pale faded drab dingy colorful
transparent translucent opaque red orange yellow green blue purple violet
pink brown tan beige black white gray grey golden silver bronze crimson
scarlet maroon navy teal turquoise olive ivory cream khaki
happy glad cheerful joyful merry sad angry furious annoyed irritated
upset anxious worried nervous tense restless calm serene tranquil
peaceful relaxed excited eager energetic lively spirited animated bored
weary tired exhausted drowsy sleepy sluggish alert awake attentive
watchful wary cautious careful careless bold daring brave timid shy meek
proud scared afraid frightened startled alarmed shocked surprised
puzzled confused curious amused playful mischievous frisky
easy simple effortless difficult tricky complicated complex intricate
plain fancy ornate elegant graceful clumsy awkward good fine decent
mediocre poor bad awful terrible horrible dreadful wonderful marvelous
fantastic amazing incredible beautiful lovely gorgeous stunning
attractive handsome pretty cute adorable charming ugly hideous nice
pleasant delightful enjoyable unpleasant annoying soothing calming
relaxing refreshing restful violent fierce ferocious savage brutal
vicious wild untamed feral tame docile friendly hostile aggressive male
female human natural artificial synthetic organic genuine authentic real
fake false true actual accurate precise exact approximate right wrong
correct proper main primary single lone solitary double triple multiple
numerous abundant plentiful scarce rare common usual ordinary typical
normal standard regular irregular odd strange weird bizarre peculiar
unusual unique special particular general various different distinct
separate same identical similar alike equal whole entire complete total
partial broken damaged ruined wrecked shattered smashed crushed cracked
chipped dented scratched torn ripped frayed worn tattered shabby bent
twisted warped crooked curved curly wavy straight upright vertical
horizontal diagonal parallel round circular oval square rectangular
triangular pointed pointy blunt jagged serrated spiky bristly prickly
thorny furry hairy shaggy woolly fluffy feathery silky velvety leathery
rubbery waxy greasy oily slippery slick slimy sticky gooey tacky gritty
grainy sandy powdery crumbly flaky crusty chewy crunchy mushy tender
juicy tasty sweet sour bitter salty spicy bland fragrant smelly smoky
earthy wooden woody glassy stony rocky muddy grassy leafy mossy bushy
flowery weedy barren fertile lush green overgrown trimmed busy crowded
packed congested jammed deserted abandoned vacant urban rural suburban
rustic coastal tropical alpine mountainous hilly rolling paved unpaved
bumpy slushy flooded swollen rushing raging churning swirling foamy
frothy choppy turbulent placid still stagnant rippling babbling
meandering winding lazy
""".split()

ADJ_NO_COMPARE = set("""
silent musical electric electronic acoustic vocal instrumental audible
inaudible metallic mechanical robotic male female human natural artificial
synthetic organic genuine authentic fake false counterfeit true actual
factual single double dual triple multiple unique whole entire complete
total partial identical equal equivalent vertical horizontal diagonal
parallel circular oval spherical square rectangular triangular wooden
plastic main principal primary chief central major minor key crucial
critical vital essential urban rural suburban coastal inland tropical
polar arctic alpine dead
""".split())


def vowel_groups(word):
    n = 0
    prev = False
    for ch in word:
        isv = ch in VOWELS
        if isv and not prev:
            n += 1
        prev = isv
    return n


def doubles_final(word):
    # single final consonant after a single vowel, one syllable: tap -> tapping
    if len(word) < 3 or vowel_groups(word) != 1:
        return False
    a, b, c = word[-3], word[-2], word[-1]
    return (c not in VOWELS and c not in "wxy"
            and b in VOWELS and a not in VOWELS)


def plural_form(noun):
    if noun in IRREGULAR_PLURALS:
        return IRREGULAR_PLURALS[noun]
    if noun in F_TO_VES:
        stem = noun[:-2] if noun.endswith("fe") else noun[:-1]
        return stem + "ves"
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and noun[-2] not in VOWELS:
        return noun[:-1] + "ies"
    if noun.endswith("o") and noun[-2] not in VOWELS:
        return noun + "es"
    return noun + "s"


def verb_forms(stem):
    """Lexicon forms for one verb.

    Regular pasts and gerunds always end in -ed/-ing and are caught by the
    suffix rules, so only the stem and 3rd-person form need entries; the
    irregular table contributes its full paradigm.
    """
    if stem in IRREGULAR_VERBS:
        s3, past, part, ger = IRREGULAR_VERBS[stem]
        return {stem, s3, past, part, ger}
    if stem.endswith(("s", "x", "z", "ch", "sh")):
        s3 = stem + "es"
    elif stem.endswith("y") and stem[-2] not in VOWELS:
        s3 = stem[:-1] + "ies"
    elif stem.endswith("o"):
        s3 = stem + "es"
    else:
        s3 = stem + "s"
    return {stem, s3}


def adj_forms(stem):
    forms = {stem}
    if stem in ADJ_NO_COMPARE:
        return forms
    # comparative/superlative only where the regular rule is reliable
    if stem.endswith("y") and stem[-2] not in VOWELS:
        forms.add(stem[:-1] + "ier")
        forms.add(stem[:-1] + "iest")
    elif len(stem) <= 5 and vowel_groups(stem) == 1:
        if stem.endswith("e"):
            forms.add(stem + "r")
            forms.add(stem + "st")
        elif doubles_final(stem):
            forms.add(stem + stem[-1] + "er")
            forms.add(stem + stem[-1] + "est")
        else:
            forms.add(stem + "er")
            forms.add(stem + "est")
    return forms


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "src/capcal/data/lexicon.tsv"
    entries = {}

    def add(word, tag):
        word = word.strip().lower()
        if word and not word.isascii():
            return
        if word and word not in entries:
            entries[word] = tag

    for w in FUNCTION_WORDS:
        add(w, "OTHER")
    for stem in VERB_STEMS:
        for f in sorted(verb_forms(stem)):
            add(f, "VERB")
    for stem in NOUN_STEMS:
        add(stem, "NOUN")
        if stem not in NO_PLURAL:
            add(plural_form(stem), "NOUN")
    for stem in ADJ_STEMS:
        for f in sorted(adj_forms(stem)):
            add(f, "ADJ")

    with open(out_path, "w", encoding="utf-8") as fh:
        for word in sorted(entries):
            fh.write(f"{word}\t{entries[word]}\n")
    counts = {}
    for tag in entries.values():
        counts[tag] = counts.get(tag, 0) + 1
    print(f"{len(entries)} entries -> {out_path}")
    print("  " + ", ".join(f"{k}: {v}" for k, v in sorted(counts.items())))


if __name__ == "__main__":
    main()
